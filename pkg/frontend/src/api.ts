// Typed client for the venue service HTTP API. Every view in this package
// goes through this module; nothing else in the client touches the network.

export type Category = "essential" | "desirable" | "extraordinary";
export type AnswerKindName = "yes_no" | "free_text";

export interface SourceStandard {
  standard_id: string;
  version: string;
}

export interface FormItemView {
  key: string;
  text: string;
  category: Category;
  provenance: [string, string][];
  followup_tree_ref: string | null;
}

export interface FormView {
  form_id: string;
  source_standards: SourceStandard[];
  items: FormItemView[];
}

export interface TrailRow {
  node_id: string;
  prompt: string;
  answer_kind: AnswerKindName;
  answer: string | null;
}

export interface ItemStatusView {
  status: string;
  note: string;
}

export interface SessionView {
  session_id: string;
  reviewer_id: string;
  venue_kind: string;
  form_id: string;
  state: "open" | "complete";
  revealed: [string, string][];
  trail: Record<string, TrailRow[]>;
  current_prompts: Record<
    string,
    { node_id: string; prompt: string; answer_kind: AnswerKindName }
  >;
  max_note_length: number;
  statuses: Record<string, ItemStatusView | null>;
  marks: Record<string, boolean>;
  comments: string;
  missing: string[];
}

export interface SubmissionView {
  submission_id: string;
  title: string;
  declared_methods: string[];
  declared_supplements: string[];
  status: string;
  adhoc: boolean;
  form_id: string | null;
  session_ids: string[];
}

export interface AgreementView {
  percent: number | null;
  kappa: number | null;
  alpha: number | null;
  degenerate: boolean;
  recommendation: "sufficient" | "recruit_third_reviewer";
  metric: string;
  threshold: number;
}

export interface VerdictView {
  outcome: string;
  nominated: boolean;
  basis: { item_key: string; status: string }[];
}

export interface LetterResponse {
  verdict: VerdictView;
  letter: unknown;
  text: string;
}

export interface ChecklistResponse {
  form_id: string;
  entries: { key: string; text: string; category: Category }[];
}

export interface AdhocItemIn {
  text: string;
  category: Category;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

async function raise(response: Response): Promise<never> {
  let code = "error";
  let detail = response.statusText;
  try {
    const body = await response.json();
    if (body && typeof body.error === "string") code = body.error;
    if (body && typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(response.status, code, detail);
}

export class ApiClient {
  constructor(public readonly baseUrl: string) {}

  private async send<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) await raise(response);
    return (await response.json()) as T;
  }

  createSubmission(input: {
    title: string;
    methods?: string[];
    supplements?: string[];
    submission_id?: string;
    adhoc_items?: AdhocItemIn[];
  }): Promise<SubmissionView> {
    return this.send("POST", "/submissions", input);
  }

  submission(id: string): Promise<SubmissionView> {
    return this.send("GET", `/submissions/${id}`);
  }

  triageChecks(): Promise<{ checks: string[] }> {
    return this.send("GET", "/triage-checks");
  }

  checklist(id: string): Promise<ChecklistResponse> {
    return this.send("GET", `/submissions/${id}/checklist`);
  }

  triage(
    id: string,
    triagerId: string,
    results: Record<string, boolean>,
    corrected?: { methods?: string[]; supplements?: string[] },
  ): Promise<SubmissionView> {
    return this.send("POST", `/submissions/${id}/triage`, {
      triager_id: triagerId,
      results,
      corrected_methods: corrected?.methods ?? null,
      corrected_supplements: corrected?.supplements ?? null,
    });
  }

  openReviews(id: string, reviewerIds: string[]): Promise<{ session_ids: string[] }> {
    return this.send("POST", `/submissions/${id}/reviewers`, {
      reviewer_ids: reviewerIds,
    });
  }

  form(formId: string): Promise<FormView> {
    return this.send("GET", `/forms/${formId}`);
  }

  session(sessionId: string): Promise<SessionView> {
    return this.send("GET", `/sessions/${sessionId}`);
  }

  answer(
    sessionId: string,
    itemKey: string,
    nodeId: string,
    value: string,
  ): Promise<SessionView> {
    return this.send("POST", `/sessions/${sessionId}/answers`, {
      item_key: itemKey,
      node_id: nodeId,
      value,
    });
  }

  mark(sessionId: string, itemKey: string, present: boolean): Promise<SessionView> {
    return this.send("POST", `/sessions/${sessionId}/marks`, {
      item_key: itemKey,
      present,
    });
  }

  complete(sessionId: string, comments: string): Promise<SessionView> {
    return this.send("POST", `/sessions/${sessionId}/complete`, { comments });
  }

  agreement(id: string): Promise<AgreementView> {
    return this.send("GET", `/submissions/${id}/agreement`);
  }

  // The raw body is kept verbatim: the dashboard displays those bytes, so
  // what the editor sees is the service's answer, not a re-serialization.
  async decide(id: string): Promise<{ raw: string; verdict: VerdictView }> {
    const response = await fetch(this.baseUrl + `/submissions/${id}/decision`, {
      method: "POST",
    });
    if (!response.ok) await raise(response);
    const raw = await response.text();
    return { raw, verdict: JSON.parse(raw) as VerdictView };
  }

  revisionCheck(
    id: string,
    marks: Record<string, boolean>,
  ): Promise<{ accepted: boolean; open_keys: string[]; status: string }> {
    return this.send("POST", `/submissions/${id}/revision-check`, { marks });
  }

  letter(id: string): Promise<LetterResponse> {
    return this.send("GET", `/submissions/${id}/letter`);
  }
}
