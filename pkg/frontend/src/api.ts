/** Typed client over the competence service's JSON endpoints.
 *
 * The UI never computes gaps or plans itself; every number it shows
 * comes back from one of these calls.
 */

import {
  ApiError,
  ApiErrorBody,
  EnrollResponse,
  GapReport,
  RecommendationsResponse,
  SparqlResults,
} from './types.js';

async function expectJson<T>(response: Response): Promise<T> {
  if (response.ok) {
    return (await response.json()) as T;
  }
  let code = 'http-error';
  let message = `${response.status} ${response.statusText}`;
  let detail: unknown;
  try {
    const body = (await response.json()) as ApiErrorBody;
    code = body.error.code;
    message = body.error.message;
    detail = body.error.detail;
  } catch {
    // non-JSON error body; keep the HTTP status text
  }
  throw new ApiError(response.status, code, message, detail);
}

/** The service surface the UI consumes. */
export interface CompetenceApi {
  health(): Promise<{ status: string }>;
  profiles(): Promise<string[]>;
  occupations(): Promise<string[]>;
  profileCompetences(profile: string, session?: string): Promise<SparqlResults>;
  gap(profile: string, occupation: string, session?: string): Promise<GapReport>;
  recommendations(
    profile: string,
    occupation: string,
    session?: string,
  ): Promise<RecommendationsResponse>;
  enroll(session: string, profile: string, training: string): Promise<EnrollResponse>;
  deleteSession(session: string): Promise<void>;
}

export class ApiClient implements CompetenceApi {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private url(path: string, params?: Record<string, string>): string {
    const u = new URL(path, this.baseUrl);
    for (const [key, value] of Object.entries(params ?? {})) {
      u.searchParams.set(key, value);
    }
    return u.toString();
  }

  async health(): Promise<{ status: string }> {
    return expectJson(await this.fetchFn(this.url('/health')));
  }

  async profiles(): Promise<string[]> {
    const body = await expectJson<{ profiles: string[] }>(
      await this.fetchFn(this.url('/profiles')),
    );
    return body.profiles;
  }

  async occupations(): Promise<string[]> {
    const body = await expectJson<{ occupations: string[] }>(
      await this.fetchFn(this.url('/occupations')),
    );
    return body.occupations;
  }

  async profileCompetences(profile: string, session?: string): Promise<SparqlResults> {
    const params: Record<string, string> = {};
    if (session) params.session = session;
    return expectJson(
      await this.fetchFn(this.url(`/profiles/${encodeURIComponent(profile)}/competences`, params)),
    );
  }

  async gap(profile: string, occupation: string, session?: string): Promise<GapReport> {
    const params: Record<string, string> = { profile, occupation };
    if (session) params.session = session;
    return expectJson(await this.fetchFn(this.url('/gap', params)));
  }

  async recommendations(
    profile: string,
    occupation: string,
    session?: string,
  ): Promise<RecommendationsResponse> {
    const params: Record<string, string> = { profile, occupation };
    if (session) params.session = session;
    return expectJson(await this.fetchFn(this.url('/recommendations', params)));
  }

  async enroll(session: string, profile: string, training: string): Promise<EnrollResponse> {
    return expectJson(
      await this.fetchFn(this.url(`/whatif/${encodeURIComponent(session)}/enroll`), {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify({ profile, training }),
      }),
    );
  }

  async deleteSession(session: string): Promise<void> {
    const response = await this.fetchFn(this.url(`/whatif/${encodeURIComponent(session)}`), {
      method: 'DELETE',
    });
    // a session the server never saw is already "deleted"
    if (!response.ok && response.status !== 404) {
      await expectJson(response);
    }
  }
}
