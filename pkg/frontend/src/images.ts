/**
 * Class-per-subfolder image dataset loading.
 *
 * Label codes are stable: sorted class-folder names map to 0..C-1.  Files
 * inside each folder are visited in sorted-name order so extraction is
 * deterministic.  Unreadable images are skipped with a warning and counted.
 */
import * as fs from 'fs';
import * as path from 'path';
import { PNG } from 'pngjs';

export interface LoadedImage {
  /** RGB pixels in [0, 255], row-major, height x width x 3 */
  pixels: Float32Array;
  width: number;
  height: number;
  label: number;
  file: string;
}

export interface DatasetScan {
  images: LoadedImage[];
  /** class folder name -> label code */
  labelMap: Record<string, number>;
  skipped: number;
}

const IMAGE_EXTS = new Set(['.png']);

export function listClassFolders(datasetDir: string): string[] {
  const entries = fs
    .readdirSync(datasetDir, { withFileTypes: true })
    .filter(e => e.isDirectory())
    .map(e => e.name)
    .sort();
  if (entries.length === 0) {
    throw new Error(`no class folders in ${datasetDir}`);
  }
  return entries;
}

function decodePng(file: string): { pixels: Float32Array; width: number; height: number } {
  const png = PNG.sync.read(fs.readFileSync(file));
  const { width, height, data } = png; // RGBA
  const pixels = new Float32Array(width * height * 3);
  for (let i = 0, j = 0; i < width * height; i++, j += 4) {
    pixels[i * 3] = data[j];
    pixels[i * 3 + 1] = data[j + 1];
    pixels[i * 3 + 2] = data[j + 2];
  }
  return { pixels, width, height };
}

export function scanDataset(datasetDir: string): DatasetScan {
  const folders = listClassFolders(datasetDir);
  const labelMap: Record<string, number> = {};
  folders.forEach((name, i) => (labelMap[name] = i));

  const images: LoadedImage[] = [];
  let skipped = 0;
  for (const folder of folders) {
    const dir = path.join(datasetDir, folder);
    const files = fs
      .readdirSync(dir)
      .filter(f => IMAGE_EXTS.has(path.extname(f).toLowerCase()))
      .sort();
    if (files.length === 0) {
      throw new Error(`class folder ${dir} contains no images`);
    }
    for (const f of files) {
      const file = path.join(dir, f);
      try {
        const { pixels, width, height } = decodePng(file);
        images.push({ pixels, width, height, label: labelMap[folder], file });
      } catch (err) {
        console.warn(`skipping unreadable image ${file}: ${err}`);
        skipped++;
      }
    }
  }
  if (images.length === 0) {
    throw new Error(`no readable images under ${datasetDir}`);
  }
  return { images, labelMap, skipped };
}
