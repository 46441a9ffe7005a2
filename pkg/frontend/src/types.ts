/** Wire types mirroring the service's JSON contracts. */

export interface SparqlBindingCell {
  type: 'uri' | 'literal' | 'bnode';
  value: string;
  datatype?: string;
  'xml:lang'?: string;
}

export type SparqlBinding = Record<string, SparqlBindingCell>;

export interface SparqlResults {
  head: { vars: string[] };
  results: { bindings: SparqlBinding[] };
}

export interface GapMissingEntry {
  competence: string;
  requiredLevel?: string;
}

export interface GapUnderLeveledEntry {
  competence: string;
  possessedLevel: string;
  requiredLevel: string;
}

export interface GapReport {
  profile: string;
  occupation: string;
  missing: GapMissingEntry[];
  underLeveled: GapUnderLeveledEntry[];
  satisfied: string[];
}

export interface PlanStep {
  training: string;
  covers: string[];
  startOffsetDays: number;
}

export interface TrainingPlan {
  steps: PlanStep[];
  totalDurationDays: number;
  totalCost: number;
  uncoverable: string[];
}

export interface RecommendationsResponse {
  plans: TrainingPlan[];
}

export interface EnrollResponse {
  session: string;
  actions: { profile: string; training: string }[];
  overlayTriples: number;
}

export interface ApiErrorBody {
  error: { code: string; message: string; detail?: unknown };
}

/** Service error carrying the machine code and HTTP status. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly detail?: unknown,
  ) {
    super(message);
  }
}

/** One row of the profile browser: a competence instance and its level. */
export interface CompetenceRow {
  competence: string;
  level: string | null;
}

/** A simulated enrollment recorded in the what-if timeline. */
export interface TimelineAction {
  training: string;
}
