import { spawnSync } from 'child_process';
import * as fs from 'fs';
import * as os from 'os';
import * as path from 'path';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { extract } from '../src/extract';
import { decodeSidx } from '../src/sidx';
import { makeRedBlueDataset, writePng } from './helpers';

let tmp: string;

beforeAll(() => {
  tmp = fs.mkdtempSync(path.join(os.tmpdir(), 'sepidx-extract-'));
});

afterAll(() => {
  fs.rmSync(tmp, { recursive: true, force: true });
});

// backend CLI of the scoring toolkit; numba JIT is skipped to keep tests fast
function runSepidx(args: string[]) {
  return spawnSync('sepidx', args, {
    encoding: 'utf8',
    env: { ...process.env, SEPIDX_NO_NUMBA: '1' },
  });
}

describe('extract', () => {
  it('emits structurally valid SIDX accepted by the scoring toolkit', async () => {
    const data = path.join(tmp, 'ds-struct');
    makeRedBlueDataset(data, 3);
    const out = path.join(tmp, 'out-struct');
    const result = await extract({
      datasetDir: data,
      modelNames: ['toy-conv16'],
      outputDir: out,
    });
    expect(result.sidxPaths).toHaveLength(1);
    const parsed = decodeSidx(fs.readFileSync(result.sidxPaths[0]));
    expect(parsed.q).toBe(6);
    expect(parsed.d).toBe(16); // final conv width of toy-conv16

    const proc = runSepidx(['si', '--input', result.sidxPaths[0]]);
    expect(proc.status, proc.stderr).toBe(0);
  }, 120000);

  it('scores SI = 1.0 on solid red vs solid blue through the primary CLI', async () => {
    const data = path.join(tmp, 'ds-redblue');
    makeRedBlueDataset(data, 4);
    const out = path.join(tmp, 'out-redblue');
    const result = await extract({
      datasetDir: data,
      modelNames: ['toy-conv16'],
      outputDir: out,
      includeRawBaseline: true,
    });
    for (const file of result.sidxPaths) {
      const proc = runSepidx(['si', '--input', file, '--json']);
      expect(proc.status, proc.stderr).toBe(0);
      expect(JSON.parse(proc.stdout).si_value).toBe(1.0);
    }
  }, 120000);

  it('labels follow sorted folder names and the raw baseline is 64x64x3', async () => {
    const data = path.join(tmp, 'ds-labels');
    // created out of sorted order on purpose
    writePng(path.join(data, 'zebra', 'a.png'), 16, 16, [10, 10, 10]);
    writePng(path.join(data, 'zebra', 'b.png'), 16, 16, [12, 12, 12]);
    writePng(path.join(data, 'apple', 'a.png'), 16, 16, [200, 10, 10]);
    writePng(path.join(data, 'apple', 'b.png'), 16, 16, [210, 10, 10]);
    writePng(path.join(data, 'mango', 'a.png'), 16, 16, [200, 180, 10]);
    writePng(path.join(data, 'mango', 'b.png'), 16, 16, [210, 190, 10]);
    const out = path.join(tmp, 'out-labels');
    const result = await extract({
      datasetDir: data,
      modelNames: [],
      outputDir: out,
      includeRawBaseline: true,
    });
    const sidecar = JSON.parse(fs.readFileSync(result.sidecarPath, 'utf8'));
    expect(sidecar.schema).toBe('sepidx-extract/1');
    expect(sidecar.label_map).toEqual({ apple: 0, mango: 1, zebra: 2 });
    const parsed = decodeSidx(fs.readFileSync(result.sidxPaths[0]));
    expect([...parsed.labels]).toEqual([0, 0, 1, 1, 2, 2]);
    expect(parsed.d).toBe(64 * 64 * 3);
  }, 60000);

  it('is deterministic across runs', async () => {
    const data = path.join(tmp, 'ds-det');
    makeRedBlueDataset(data, 2);
    const bytes: Buffer[] = [];
    for (const run of ['a', 'b']) {
      const out = path.join(tmp, `out-det-${run}`);
      const result = await extract({
        datasetDir: data,
        modelNames: ['toy-conv16'],
        outputDir: out,
      });
      bytes.push(fs.readFileSync(result.sidxPaths[0]));
    }
    expect(Buffer.compare(bytes[0], bytes[1])).toBe(0);
  }, 120000);

  it('skips unreadable images with a count and rejects bad inputs', async () => {
    const data = path.join(tmp, 'ds-bad');
    makeRedBlueDataset(data, 2);
    fs.writeFileSync(path.join(data, 'red', 'corrupt.png'), Buffer.from('not a png'));
    const result = await extract({
      datasetDir: data,
      modelNames: ['toy-conv16'],
      outputDir: path.join(tmp, 'out-bad'),
    });
    expect(result.skippedImages).toBe(1);
    expect(decodeSidx(fs.readFileSync(result.sidxPaths[0])).q).toBe(4);

    await expect(
      extract({ datasetDir: data, modelNames: ['nope'], outputDir: path.join(tmp, 'x') }),
    ).rejects.toThrow(/unknown model/);

    const empty = path.join(tmp, 'ds-empty');
    fs.mkdirSync(path.join(empty, 'classA'), { recursive: true });
    await expect(
      extract({ datasetDir: empty, modelNames: [], outputDir: path.join(tmp, 'y') }),
    ).rejects.toThrow(/no images/);
  }, 120000);
});
