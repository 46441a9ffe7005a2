/** State of the what-if explorer.
 *
 * All panel contents are copied verbatim from service responses; the
 * client never recomputes a gap or a plan.  Undo pops exactly one
 * simulated action: the session is dropped server-side and the
 * remaining actions are replayed through the same endpoint, so the
 * state after (action; undo) serializes identically to the state
 * before the action.
 */

import { CompetenceApi } from './api.js';
import {
  ApiError,
  CompetenceRow,
  GapReport,
  TimelineAction,
  TrainingPlan,
} from './types.js';

export interface BlockedEnrollment {
  training: string;
  unmetCompetences: string[];
}

export interface ViewState {
  profiles: string[];
  occupations: string[];
  selectedProfile: string | null;
  selectedOccupation: string | null;
  competenceRows: CompetenceRow[];
  gap: GapReport | null;
  plans: TrainingPlan[];
  sessionId: string;
  history: TimelineAction[];
  blocked: BlockedEnrollment | null;
  error: string | null;
  loading: boolean;
}

function freshState(sessionId: string): ViewState {
  return {
    profiles: [],
    occupations: [],
    selectedProfile: null,
    selectedOccupation: null,
    competenceRows: [],
    gap: null,
    plans: [],
    sessionId,
    history: [],
    blocked: null,
    error: null,
    loading: false,
  };
}

export type Listener = (state: ViewState) => void;

export class ViewModel {
  private state: ViewState;
  private listeners: Listener[] = [];

  constructor(
    private readonly api: CompetenceApi,
    sessionId: string = `tab-${Math.random().toString(36).slice(2, 10)}`,
  ) {
    this.state = freshState(sessionId);
  }

  get current(): ViewState {
    return this.state;
  }

  /** Stable serialization used by tests to compare states. */
  snapshot(): string {
    return JSON.stringify({ ...this.state, loading: false });
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private setState(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  private get session(): string | undefined {
    return this.state.history.length > 0 ? this.state.sessionId : undefined;
  }

  async init(): Promise<void> {
    this.setState({ loading: true, error: null });
    try {
      const [profiles, occupations] = await Promise.all([
        this.api.profiles(),
        this.api.occupations(),
      ]);
      this.setState({ profiles, occupations, loading: false });
    } catch (err) {
      this.fail(err);
    }
  }

  async selectProfile(profile: string | null): Promise<void> {
    this.setState({
      selectedProfile: profile,
      competenceRows: [],
      gap: null,
      plans: [],
      history: [],
      blocked: null,
    });
    await this.api.deleteSession(this.state.sessionId).catch(() => undefined);
    if (profile !== null) {
      await this.refresh();
    }
  }

  async selectOccupation(occupation: string | null): Promise<void> {
    this.setState({ selectedOccupation: occupation, gap: null, plans: [], blocked: null });
    if (occupation !== null) {
      await this.refresh();
    }
  }

  /** Re-fetch every panel from the service (in-session when simulating). */
  async refresh(): Promise<void> {
    const { selectedProfile, selectedOccupation } = this.state;
    if (selectedProfile === null) {
      return;
    }
    this.setState({ loading: true, error: null });
    try {
      const rows = await this.api.profileCompetences(selectedProfile, this.session);
      const competenceRows: CompetenceRow[] = rows.results.bindings.map((b) => ({
        competence: b.competence?.value ?? '',
        level: b.niveau ? b.niveau.value : null,
      }));
      let gap: GapReport | null = null;
      let plans: TrainingPlan[] = [];
      if (selectedOccupation !== null) {
        gap = await this.api.gap(selectedProfile, selectedOccupation, this.session);
        plans = (
          await this.api.recommendations(selectedProfile, selectedOccupation, this.session)
        ).plans;
      }
      this.setState({ competenceRows, gap, plans, loading: false });
    } catch (err) {
      this.fail(err);
    }
  }

  /** Simulate enrolling the selected profile; 422 surfaces inline. */
  async enroll(training: string): Promise<void> {
    const profile = this.state.selectedProfile;
    if (profile === null) {
      return;
    }
    this.setState({ blocked: null, error: null });
    try {
      await this.api.enroll(this.state.sessionId, profile, training);
      this.setState({ history: [...this.state.history, { training }] });
      await this.refresh();
    } catch (err) {
      if (err instanceof ApiError && err.code === 'prerequisite-unmet') {
        this.setState({
          blocked: {
            training,
            unmetCompetences: Array.isArray(err.detail) ? (err.detail as string[]) : [],
          },
        });
        return;
      }
      this.fail(err);
    }
  }

  /** Pop exactly one simulated action and replay the rest. */
  async undo(): Promise<void> {
    const profile = this.state.selectedProfile;
    if (profile === null || this.state.history.length === 0) {
      return;
    }
    const remaining = this.state.history.slice(0, -1);
    await this.api.deleteSession(this.state.sessionId);
    for (const action of remaining) {
      await this.api.enroll(this.state.sessionId, profile, action.training);
    }
    this.setState({ history: remaining, blocked: null });
    await this.refresh();
  }

  /** Drop the session and every simulated action. */
  async reset(): Promise<void> {
    await this.api.deleteSession(this.state.sessionId);
    this.setState({ history: [], blocked: null });
    await this.refresh();
  }

  private fail(err: unknown): void {
    const message = err instanceof Error ? err.message : String(err);
    this.setState({ error: message, loading: false });
  }
}
