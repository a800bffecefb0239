// JSON schemas served by the insightrank HTTP API, consumed verbatim.

export interface Annotation {
  kind: string; // point_highlight | trend_line | band | cell_highlight
  target: unknown;
  label: string;
}

export type DataRow = Record<string, number | string>;

export interface ChartSpec {
  chart_type: string; // histogram | box | scatter | heatmap | line | bar | grouped_bar | strip
  encodings: Record<string, string>; // channel -> column name
  weight: number;
  title: string;
  insight_sentence: string;
  annotations: Annotation[];
  inline_data: DataRow[];
}

export interface Combination {
  signature: string[];
  columns: string[];
}

export interface Insight {
  combination: Combination;
  phi: number;
  penalized_phi: number;
  score: number;
  chart: ChartSpec | null;
  annotations: Annotation[];
}

export interface InsightTypeRow {
  insight_type: string;
  psi: number;
  pool_size: number;
  insights: Insight[];
}

export interface Recommendations {
  dataset: string;
  config_fingerprint: string;
  top_r: number;
  top_k: number;
  empty: boolean;
  rows: InsightTypeRow[];
}

export interface Bookmark {
  id: string;
  dataset_id: string;
  insight_type_id: string;
  combination: Combination;
  chart: ChartSpec;
  created_at: string;
}

export interface SchemaColumn {
  name: string;
  attr_type: string;
  null_fraction: number;
}
