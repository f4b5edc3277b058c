#!/usr/bin/env node
/**
 * extract --data DIR --models NAME[,NAME...] --out DIR [--raw-baseline]
 *
 * Emits one SIDX embedding file per model plus a sepidx-extract/1 sidecar.
 * Exit 0 on success, 2 on bad input, 1 on internal faults.
 */
import { parseArgs } from 'util';

import { extract } from './extract';
import { knownExtractors } from './models';

export async function main(argv: string[]): Promise<number> {
  let args;
  try {
    args = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        data: { type: 'string' },
        models: { type: 'string' },
        out: { type: 'string' },
        'raw-baseline': { type: 'boolean', default: false },
        'baseline-size': { type: 'string' },
      },
    });
  } catch (err) {
    console.error(String(err));
    return 2;
  }
  const cmd = args.positionals[0];
  if (cmd !== 'extract') {
    console.error(`usage: sepidx-extract extract --data DIR --models LIST --out DIR [--raw-baseline]`);
    console.error(`known models: ${knownExtractors().join(', ')}`);
    return 2;
  }
  const { data, models, out } = args.values;
  if (!data || !models || !out) {
    console.error('--data, --models and --out are required');
    return 2;
  }
  try {
    const result = await extract({
      datasetDir: data,
      modelNames: models.split(',').map(s => s.trim()).filter(Boolean),
      outputDir: out,
      includeRawBaseline: args.values['raw-baseline'],
      baselineSize: args.values['baseline-size']
        ? parseInt(args.values['baseline-size'], 10)
        : undefined,
    });
    for (const p of result.sidxPaths) console.log(p);
    if (result.skippedImages > 0) {
      console.error(`warning: skipped ${result.skippedImages} unreadable image(s)`);
    }
    return 0;
  } catch (err) {
    console.error(String(err));
    return 2;
  }
}

if (require.main === module) {
  main(process.argv.slice(2)).then(code => {
    process.exitCode = code;
  });
}
