/** View state of the console; chart parameters mirror the server defaults. */

export const DEFAULT_THRESHOLDS = [1, 10, 100, 1_000, 10_000, 100_000, 1_000_000];

export const DEFAULT_BINS: [number, number][] = [
  [0, 0.25],
  [0.25, 0.5],
  [0.5, 0.75],
  [0.75, 1],
];

export interface ChartParams {
  ks: number[] | null; // null: let the server pick per instance
  thresholds: number[];
  bins: [number, number][];
}

export interface ViewState {
  selectedCorpora: string[];
  queryText: string;
  uploadedFile: File | null;
  chart: ChartParams;
  pollingJobs: string[];
}

export function initialViewState(): ViewState {
  return {
    selectedCorpora: [],
    queryText: "",
    uploadedFile: null,
    chart: { ks: null, thresholds: [...DEFAULT_THRESHOLDS], bins: DEFAULT_BINS.map((b) => [...b]) },
    pollingJobs: [],
  };
}
