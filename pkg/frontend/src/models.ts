/**
 * Feature-extractor registry.
 *
 * Every extractor declares its expected input geometry and builds a layers
 * model whose output is the final convolutional feature map; global average
 * pooling over the spatial axes happens at extraction time.  The bundled
 * extractors use seeded initializers so extraction is deterministic without
 * any weight download; real zoo models can be registered at runtime with
 * registerExtractor (e.g. from a locally saved tf.LayersModel).
 */
import * as tf from '@tensorflow/tfjs';

export interface ExtractorSpec {
  name: string;
  /** square input edge length after resizing */
  inputSize: number;
  /** input channel count (3 = RGB) */
  channels: number;
  /** human-readable preprocessing note, recorded in the sidecar */
  preprocessing: string;
  /** maps pixels in [0, 255] to model input range */
  normalize(x: tf.Tensor4D): tf.Tensor4D;
  /** model producing the final feature map, shape [batch, h, w, features] */
  build(): tf.LayersModel;
}

function seededConvNet(inputSize: number, widths: number[], seed: number): tf.LayersModel {
  const model = tf.sequential();
  widths.forEach((filters, i) => {
    model.add(
      tf.layers.conv2d({
        inputShape: i === 0 ? [inputSize, inputSize, 3] : undefined,
        filters,
        kernelSize: 3,
        padding: 'same',
        activation: 'relu',
        kernelInitializer: tf.initializers.glorotUniform({ seed: seed + i }),
        biasInitializer: 'zeros',
      }),
    );
    model.add(tf.layers.maxPooling2d({ poolSize: 2 }));
  });
  return model;
}

const unitScale = {
  preprocessing: 'RGB scaled to [0, 1]',
  normalize: (x: tf.Tensor4D) => tf.div(x, 255) as tf.Tensor4D,
};

const registry = new Map<string, ExtractorSpec>();

export function registerExtractor(spec: ExtractorSpec): void {
  registry.set(spec.name, spec);
}

registerExtractor({
  name: 'toy-conv16',
  inputSize: 64,
  channels: 3,
  ...unitScale,
  build: () => seededConvNet(64, [8, 16], 41),
});

registerExtractor({
  name: 'toy-conv32',
  inputSize: 96,
  channels: 3,
  ...unitScale,
  build: () => seededConvNet(96, [8, 16, 32], 97),
});

export function resolveExtractor(name: string): ExtractorSpec {
  const spec = registry.get(name);
  if (!spec) {
    const known = [...registry.keys()].sort().join(', ');
    throw new Error(`unknown model "${name}" (known: ${known})`);
  }
  return spec;
}

export function knownExtractors(): string[] {
  return [...registry.keys()].sort();
}
