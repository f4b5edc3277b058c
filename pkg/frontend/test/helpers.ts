import * as fs from 'fs';
import * as path from 'path';
import { PNG } from 'pngjs';

export function writePng(
  file: string,
  width: number,
  height: number,
  rgb: [number, number, number],
  noiseSeed = 0,
): void {
  const png = new PNG({ width, height });
  // tiny deterministic per-pixel jitter so images within a class differ
  let s = noiseSeed >>> 0;
  const next = () => {
    s = (s * 1664525 + 1013904223) >>> 0;
    return s % 7;
  };
  for (let i = 0; i < width * height; i++) {
    png.data[i * 4] = Math.min(255, rgb[0] + (noiseSeed ? next() : 0));
    png.data[i * 4 + 1] = Math.min(255, rgb[1] + (noiseSeed ? next() : 0));
    png.data[i * 4 + 2] = Math.min(255, rgb[2] + (noiseSeed ? next() : 0));
    png.data[i * 4 + 3] = 255;
  }
  fs.mkdirSync(path.dirname(file), { recursive: true });
  fs.writeFileSync(file, PNG.sync.write(png));
}

/** two-class dataset: solid red vs solid blue, n images each */
export function makeRedBlueDataset(dir: string, n = 3, size = 32): void {
  for (let i = 0; i < n; i++) {
    writePng(path.join(dir, 'blue', `img${i}.png`), size, size, [0, 0, 230], i + 1);
    writePng(path.join(dir, 'red', `img${i}.png`), size, size, [230, 0, 0], i + 1);
  }
}
