export { encodeSidx, decodeSidx, writeSidx, SidxData } from './sidx';
export { scanDataset, listClassFolders, DatasetScan, LoadedImage } from './images';
export { registerExtractor, resolveExtractor, knownExtractors, ExtractorSpec } from './models';
export { extract, ExtractionJob, ExtractionResult } from './extract';
