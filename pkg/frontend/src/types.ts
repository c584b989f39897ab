/**
 * Shapes of the JSON payloads exchanged with the gaztrack HTTP service.
 *
 * These mirror the server's serialization exactly; the UI never invents
 * fields and never derives class/group relationships on its own.
 */

/** Half-open [start, end) character span into a document body. */
export type Span = [number, number];

export interface GazetteDocument {
  doc_id: string;
  date: string;
  title: string;
  body: string;
  organ: string;
  source_path: string;
}

export interface Annotation {
  action: string;
  circumstance: string;
  classification: string;
}

export type ReviewStatus = 'pending' | 'reviewed' | 'discarded';

export interface QueueItem {
  item_id: string;
  doc: GazetteDocument;
  matched_themes: string[];
  robot_group_hint: string | null;
  status: ReviewStatus;
  annotation: Annotation | null;
  reviewed_at: string | null;
  highlights: Span[];
}

export interface GatRecord {
  record_id: string;
  date: string;
  theme: string;
  action: string;
  circumstance: string;
  classification: string;
  context: string;
  group_class: string;
}

export interface FineClassInfo {
  name: string;
  group: string;
}

export interface ClassCatalog {
  fine: FineClassInfo[];
  groups: string[];
}

export interface DatasetStats {
  n_records: number;
  action_words_mean: number;
  action_words_std: number;
  circumstance_words_mean: number;
  circumstance_words_std: number;
  group_proportions: Record<string, number>;
  date_min: string;
  date_max: string;
}

export interface FoldScores {
  fold: number;
  mcc: number;
  acc: number;
  weighted_f1: number;
}

export interface CvReport {
  model: string;
  k: number;
  seed: number;
  folds: FoldScores[];
  mean: Record<string, number>;
  std: Record<string, number>;
}

export interface Suggestion {
  theme_name: string;
  candidate_token: string;
  score: number;
  direction: 'add_include' | 'add_exclude';
  evidence_count: number;
}

export interface TrainResult {
  model: string;
  n_records: number;
  vocab_size: number;
  classes: string[];
}

export interface IngestResult {
  received: number;
  enqueued: number;
}

export interface Health {
  status: string;
  documents: number;
  queue: Record<ReviewStatus, number>;
  records: number;
  themes: string[];
  rules_version: string;
  model_loaded: boolean;
}

/** Error envelope returned by every failing API call. */
export interface ErrorEnvelope {
  code: string;
  message: string;
  detail: Record<string, unknown>;
}
