// Wire types for the analysis service.

export type Mode = "correlation" | "partial_correlation";
export type Method = "pearson" | "spearman";
export type Kernel = "gaussian" | "exponential" | "boxcar" | "bisquare" | "tricube";
export type AlphaMask = null | 0.01 | 0.05;

export const KERNELS: Kernel[] = [
  "gaussian", "exponential", "boxcar", "bisquare", "tricube",
];

export interface VariableInfo {
  name: string;
  missing: number;
  min: number | null;
  max: number | null;
}

export interface Schema {
  variables: VariableInfo[];
}

export interface UploadResponse {
  dataset_id: string;
  n: number;
  geometry_kind: "point" | "polygon";
  schema: Schema;
}

export interface AnalysisRequest {
  dataset_id: string;
  mode: Mode;
  method: Method;
  var_a: string;
  var_b: string;
  controls: string[];
  kernel: Kernel;
  bandwidth_proportion: number;
  displayed_pair?: [string, string];
}

export interface AnalysisSummary {
  analysis_id: string;
  spec: {
    mode: Mode;
    method: Method;
    var_a: string;
    var_b: string;
    controls: string[];
    kernel: Kernel;
    bandwidth_proportion: number;
    displayed_pair: [string, string];
  };
  n_used: number;
  n_dropped: number;
  coef_min: number | null;
  coef_max: number | null;
  coef_mean: number | null;
  significant_at_001: number;
  significant_at_005: number;
  clamp_excursions: number;
  wall_ms: number | null;
}

export interface AnalysisResponse {
  analysis_id: string;
  summary: AnalysisSummary;
}

export type Geometry =
  | { type: "Point"; coordinates: number[] }
  | { type: "Polygon"; coordinates: number[][][] }
  | { type: "MultiPolygon"; coordinates: number[][][][] };

export interface ResultProps {
  coef: number | null;
  pval: number | null;
  valid: boolean | null;
  sig_001: boolean | null;
  sig_005: boolean | null;
  value_a: number | null;
  value_b: number | null;
  effective_n: number | null;
}

export interface ResultFeature {
  type: "Feature";
  geometry: Geometry;
  properties: ResultProps;
}

export interface ResultDocument {
  type: "FeatureCollection";
  features: ResultFeature[];
}

export interface ScatterRecord {
  index: number;
  value_a: number | null;
  value_b: number | null;
  coef: number | null;
  pval: number | null;
  significant_at: { "0.01": boolean; "0.05": boolean };
}

export interface ServiceConfig {
  tiles_url: string;
  version?: string;
}

export interface ApiErrorBody {
  error_kind: string;
  message: string;
}
