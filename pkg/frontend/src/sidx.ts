/**
 * Bit-exact writer (and reader, for tests) of the SIDX embedding container
 * consumed by the sepidx toolkit.
 *
 * Layout, all little-endian:
 *   0   magic "SIDX"
 *   4   version u8 = 1
 *   5   dtype u8: 0 = float32, 1 = float64
 *   6   2 reserved zero bytes
 *   8   q u64
 *   16  d u64
 *   24  q x u32 labels
 *   ..  q*d values, row-major
 */
import { promises as fs } from 'fs';

const MAGIC = 'SIDX';
const HEADER_BYTES = 24;

export interface SidxData {
  q: number;
  d: number;
  labels: Uint32Array;
  values: Float32Array; // row-major, q*d
}

export function encodeSidx(data: SidxData): Buffer {
  const { q, d, labels, values } = data;
  if (q < 2) throw new Error(`need at least 2 points, got ${q}`);
  if (d < 1) throw new Error(`need at least 1 feature dimension, got ${d}`);
  if (labels.length !== q) {
    throw new Error(`labels length ${labels.length} != q ${q}`);
  }
  if (values.length !== q * d) {
    throw new Error(`values length ${values.length} != q*d ${q * d}`);
  }
  for (const v of values) {
    if (!Number.isFinite(v)) throw new Error('non-finite feature value');
  }
  const buf = Buffer.alloc(HEADER_BYTES + 4 * q + 4 * q * d);
  buf.write(MAGIC, 0, 'ascii');
  buf.writeUInt8(1, 4); // version
  buf.writeUInt8(0, 5); // dtype: float32
  buf.writeBigUInt64LE(BigInt(q), 8);
  buf.writeBigUInt64LE(BigInt(d), 16);
  let off = HEADER_BYTES;
  for (let i = 0; i < q; i++, off += 4) buf.writeUInt32LE(labels[i], off);
  for (let i = 0; i < q * d; i++, off += 4) buf.writeFloatLE(values[i], off);
  return buf;
}

export async function writeSidx(path: string, data: SidxData): Promise<void> {
  await fs.writeFile(path, encodeSidx(data));
}

export function decodeSidx(buf: Buffer): SidxData {
  if (buf.length < HEADER_BYTES) throw new Error('truncated header');
  if (buf.toString('ascii', 0, 4) !== MAGIC) throw new Error('bad magic');
  if (buf.readUInt8(4) !== 1) throw new Error('unsupported version');
  const dtype = buf.readUInt8(5);
  if (dtype !== 0 && dtype !== 1) throw new Error(`unknown dtype ${dtype}`);
  const width = dtype === 0 ? 4 : 8;
  const q = Number(buf.readBigUInt64LE(8));
  const d = Number(buf.readBigUInt64LE(16));
  if (buf.length !== HEADER_BYTES + 4 * q + width * q * d) {
    throw new Error('size mismatch');
  }
  const labels = new Uint32Array(q);
  let off = HEADER_BYTES;
  for (let i = 0; i < q; i++, off += 4) labels[i] = buf.readUInt32LE(off);
  const values = new Float32Array(q * d);
  for (let i = 0; i < q * d; i++, off += width) {
    values[i] = dtype === 0 ? buf.readFloatLE(off) : buf.readDoubleLE(off);
  }
  return { q, d, labels, values };
}
