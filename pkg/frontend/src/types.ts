/** Wire types for the task-graph API (matches the canonical JSON schema). */

export interface Grounding {
  video_id: string;
  sentence_start: number;
  sentence_end: number;
}

export interface Tip {
  text: string;
  groundings: Grounding[];
}

export interface Clip {
  video_id: string;
  start_s: number;
  end_s: number;
  sentence_start: number;
  sentence_end: number;
  summary: string;
}

export interface Method {
  name: string;
  clips: Clip[];
  tips: Tip[];
}

export interface Step {
  step_name: string;
  description: string;
  methods: Method[];
}

export interface RequirementItem {
  name: string;
  kind: string;
  count: number;
  fraction: number;
  shade: string;
}

export type ApproachKind = "STANDARD" | "SIMPLE" | "COMPLEX";

export interface Approach {
  kind: ApproachKind;
  step_sequence: string[];
  supporting_video_ids: string[];
  requirements: RequirementItem[];
  steps: Step[];
}

export interface FrameRef {
  video_id: string;
  t_s: number;
  uri: string;
}

export interface OutcomeCluster {
  name: string;
  representative_frames: FrameRef[];
  approaches: Approach[];
}

export interface TaskGraph {
  schema_version: string;
  task_name: string;
  outcome_clusters: OutcomeCluster[];
  pipeline_report: {
    videos?: Record<string, string>;
    [key: string]: unknown;
  };
}

export interface TaskSummary {
  task_name: string;
  slug: string;
  outcome_count: number;
  video_count: number;
}

export interface ClipResolution {
  playback_ref: string;
  start_s: number;
  end_s: number;
  summary?: string;
}
