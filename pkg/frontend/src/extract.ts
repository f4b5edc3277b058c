/**
 * End-to-end extraction: image folder -> per-model SIDX embedding files.
 *
 * For each requested model the images are resized to the model's input
 * geometry, normalized, pushed through the feature extractor, and the final
 * feature map is globally average pooled into one vector per image.  A
 * sidecar JSON ("sepidx-extract/1") records the label map and preprocessing
 * for provenance.  With includeRawBaseline a baseline SIDX of flattened
 * resized raw pixels is emitted alongside.
 */
import * as fs from 'fs';
import * as path from 'path';
import * as tf from '@tensorflow/tfjs';

import { DatasetScan, LoadedImage, scanDataset } from './images';
import { ExtractorSpec, resolveExtractor } from './models';
import { writeSidx } from './sidx';

export interface ExtractionJob {
  datasetDir: string;
  modelNames: string[];
  outputDir: string;
  includeRawBaseline?: boolean;
  /** edge length for the raw baseline resize (default 64) */
  baselineSize?: number;
}

export interface ExtractionResult {
  sidxPaths: string[];
  sidecarPath: string;
  skippedImages: number;
}

function resized(img: LoadedImage, size: number): tf.Tensor3D {
  return tf.tidy(() => {
    const t = tf.tensor3d(img.pixels, [img.height, img.width, 3]);
    return tf.image.resizeBilinear(t, [size, size]);
  });
}

async function embedAll(scan: DatasetScan, spec: ExtractorSpec): Promise<Float32Array[]> {
  const model = spec.build();
  try {
    const rows: Float32Array[] = [];
    for (const img of scan.images) {
      const pooled = tf.tidy(() => {
        const input = resized(img, spec.inputSize).expandDims(0) as tf.Tensor4D;
        const fmap = model.predict(spec.normalize(input)) as tf.Tensor4D;
        return tf.mean(fmap, [1, 2]).squeeze(); // global average pool
      });
      rows.push((await pooled.data()) as Float32Array);
      pooled.dispose();
    }
    return rows;
  } finally {
    model.dispose();
  }
}

async function rawRows(scan: DatasetScan, size: number): Promise<Float32Array[]> {
  const rows: Float32Array[] = [];
  for (const img of scan.images) {
    const t = resized(img, size);
    rows.push((await t.data()) as Float32Array);
    t.dispose();
  }
  return rows;
}

async function emit(outPath: string, rows: Float32Array[], labels: Uint32Array): Promise<void> {
  const d = rows[0].length;
  const values = new Float32Array(rows.length * d);
  rows.forEach((row, i) => values.set(row, i * d));
  await writeSidx(outPath, { q: rows.length, d, labels, values });
}

export async function extract(job: ExtractionJob): Promise<ExtractionResult> {
  const scan = scanDataset(job.datasetDir);
  fs.mkdirSync(job.outputDir, { recursive: true });
  const labels = Uint32Array.from(scan.images.map(i => i.label));

  const sidxPaths: string[] = [];
  const outputs: Record<string, { file: string; d: number; preprocessing: string }> = {};
  for (const name of job.modelNames) {
    const spec = resolveExtractor(name);
    const rows = await embedAll(scan, spec);
    const file = path.join(job.outputDir, `${name}.sidx`);
    await emit(file, rows, labels);
    sidxPaths.push(file);
    outputs[name] = {
      file: path.basename(file),
      d: rows[0].length,
      preprocessing: `resize ${spec.inputSize}x${spec.inputSize} bilinear; ${spec.preprocessing}`,
    };
  }

  if (job.includeRawBaseline) {
    const size = job.baselineSize ?? 64;
    const rows = await rawRows(scan, size);
    const file = path.join(job.outputDir, 'raw_baseline.sidx');
    await emit(file, rows, labels);
    sidxPaths.push(file);
    outputs['raw_baseline'] = {
      file: path.basename(file),
      d: rows[0].length,
      preprocessing: `resize ${size}x${size} bilinear; flattened RGB in [0, 255]`,
    };
  }

  const sidecarPath = path.join(job.outputDir, 'extract.json');
  const sidecar = {
    schema: 'sepidx-extract/1',
    dataset_dir: path.resolve(job.datasetDir),
    label_map: scan.labelMap,
    q: scan.images.length,
    skipped_images: scan.skipped,
    outputs,
  };
  fs.writeFileSync(sidecarPath, JSON.stringify(sidecar, null, 2) + '\n');
  return { sidxPaths, sidecarPath, skippedImages: scan.skipped };
}
