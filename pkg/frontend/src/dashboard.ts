// Editor dashboard: consensus table with disputed rows, agreement versus
// the venue threshold, verdict preview, letter draft. All numbers on this
// screen are API payloads shown as received; the verdict preview is the raw
// response body of the decision endpoint, byte for byte.

import {
  AgreementView,
  ApiClient,
  ApiError,
  FormView,
  SessionView,
} from "./api.js";

export interface DashboardController {
  element: HTMLElement;
  refresh(): Promise<void>;
  decide(): Promise<void>;
  verdictRaw(): string | null;
}

interface Snapshot {
  submissionStatus: string;
  form: FormView | null;
  sessions: SessionView[];
  agreement: AgreementView | null;
  letterText: string | null;
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function formatMetric(value: number | null): string {
  return value === null ? "n/a" : value.toFixed(3);
}

export async function renderDashboard(
  container: HTMLElement,
  client: ApiClient,
  submissionId: string,
): Promise<DashboardController> {
  const doc = container.ownerDocument;
  const root = el(doc, "div", "dashboard");
  container.appendChild(root);

  let verdictBody: string | null = null;
  let notice: string | null = null;
  let stale = false;

  async function fetchSnapshot(): Promise<Snapshot> {
    const submission = await client.submission(submissionId);
    const sessions: SessionView[] = [];
    for (const sessionId of submission.session_ids) {
      sessions.push(await client.session(sessionId));
    }
    const form =
      submission.form_id !== null ? await client.form(submission.form_id) : null;
    let agreement: AgreementView | null = null;
    if (sessions.some((s) => s.state === "complete")) {
      try {
        agreement = await client.agreement(submissionId);
      } catch {
        agreement = null;
      }
    }
    let letterText: string | null = null;
    try {
      letterText = (await client.letter(submissionId)).text;
    } catch {
      letterText = null;
    }
    return {
      submissionStatus: submission.status,
      form,
      sessions,
      agreement,
      letterText,
    };
  }

  function consensusTable(snapshot: Snapshot): HTMLElement {
    const table = el(doc, "table", "consensus");
    const head = el(doc, "tr");
    head.appendChild(el(doc, "th", undefined, "item"));
    for (const session of snapshot.sessions) {
      head.appendChild(el(doc, "th", undefined, session.reviewer_id));
    }
    table.appendChild(head);

    const essentials =
      snapshot.form?.items.filter((item) => item.category === "essential") ?? [];
    for (const item of essentials) {
      const row = el(doc, "tr");
      row.setAttribute("data-item", item.key);
      row.appendChild(el(doc, "td", undefined, item.key));
      const seen = new Set<string>();
      for (const session of snapshot.sessions) {
        const status = session.statuses[item.key];
        const label = status === null || status === undefined ? "-" : status.status;
        if (label !== "-") seen.add(label);
        row.appendChild(el(doc, "td", undefined, label));
      }
      if (seen.size > 1) row.classList.add("disputed");
      table.appendChild(row);
    }
    return table;
  }

  function agreementPanel(snapshot: Snapshot): HTMLElement {
    const panel = el(doc, "div", "agreement-panel");
    panel.appendChild(el(doc, "h3", undefined, "Agreement"));
    const agreement = snapshot.agreement;
    if (agreement === null) {
      panel.appendChild(el(doc, "p", undefined, "Not available yet."));
      return panel;
    }
    const rows: [string, string][] = [
      ["percent", formatMetric(agreement.percent)],
      ["kappa", formatMetric(agreement.kappa)],
      ["alpha", formatMetric(agreement.alpha)],
      [
        "gate",
        `${agreement.metric} vs threshold ${agreement.threshold}`,
      ],
    ];
    const list = el(doc, "dl", "metrics");
    for (const [name, value] of rows) {
      list.appendChild(el(doc, "dt", undefined, name));
      list.appendChild(el(doc, "dd", undefined, value));
    }
    panel.appendChild(list);
    if (agreement.recommendation === "recruit_third_reviewer") {
      const banner = el(
        doc,
        "p",
        "recruit-banner",
        "Agreement is below the venue threshold: recruit a third reviewer.",
      );
      banner.setAttribute("data-role", "recruit-banner");
      panel.appendChild(banner);
    }
    return panel;
  }

  function render(snapshot: Snapshot): void {
    root.textContent = "";
    root.appendChild(el(doc, "h2", undefined, `Submission ${submissionId}`));
    const status = el(doc, "p", "submission-status", snapshot.submissionStatus);
    status.setAttribute("data-role", "status");
    root.appendChild(status);

    if (stale) {
      const flag = el(
        doc,
        "p",
        "stale-banner",
        "This snapshot is stale; another edit landed first. Refresh.",
      );
      flag.setAttribute("data-role", "stale");
      root.appendChild(flag);
    }
    if (notice !== null) {
      const banner = el(doc, "p", "notice", notice);
      banner.setAttribute("data-role", "notice");
      root.appendChild(banner);
    }

    root.appendChild(consensusTable(snapshot));
    root.appendChild(agreementPanel(snapshot));

    const decideBtn = el(doc, "button", "decide-btn", "Compute verdict");
    decideBtn.setAttribute("data-role", "decide");
    decideBtn.disabled = snapshot.letterText !== null;
    decideBtn.addEventListener("click", () => {
      void controller.decide();
    });
    root.appendChild(decideBtn);

    if (verdictBody !== null) {
      const pre = el(doc, "pre", "verdict-raw", verdictBody);
      pre.setAttribute("data-role", "verdict-raw");
      root.appendChild(pre);
    }
    if (snapshot.letterText !== null) {
      const letter = el(doc, "pre", "letter-text", snapshot.letterText);
      letter.setAttribute("data-role", "letter-text");
      root.appendChild(letter);
    }
  }

  const controller: DashboardController = {
    element: root,
    async refresh(): Promise<void> {
      render(await fetchSnapshot());
    },
    async decide(): Promise<void> {
      try {
        const { raw } = await client.decide(submissionId);
        verdictBody = raw;
        notice = null;
      } catch (err) {
        if (err instanceof ApiError) {
          if (err.code === "version_conflict") stale = true;
          notice = `${err.code}: ${err.message}`;
        } else {
          notice = String(err);
        }
      }
      render(await fetchSnapshot());
    },
    verdictRaw: () => verdictBody,
  };

  render(await fetchSnapshot());
  return controller;
}
