// Pure derivation of what the form screen shows from two API payloads.
// No decisions happen here: statuses come from the session verbatim and the
// only arithmetic is the progress fraction.

import type {
  FormItemView,
  FormView,
  ItemStatusView,
  SessionView,
  TrailRow,
} from "./api.js";

export type ItemState =
  | { kind: "unanswered" }
  | { kind: "yes" }
  | { kind: "in_followup"; nodeId: string }
  | { kind: "resolved"; status: string; note: string };

export interface ItemVM {
  item: FormItemView;
  state: ItemState;
  trail: TrailRow[];
  mark: boolean | null;
}

export interface SectionVM {
  standardId: string;
  items: ItemVM[];
}

export interface FormViewModel {
  formId: string;
  sessionId: string;
  reviewerId: string;
  sessionState: "open" | "complete";
  sections: SectionVM[];
  progress: number;
  missing: string[];
  comments: string;
  maxNoteLength: number;
}

function essentialState(trail: TrailRow[], status: ItemStatusView | null): ItemState {
  if (status !== null) {
    // A Met status is only reachable by answering the item's own prompt
    // with "yes"; every other status means the follow-ups ran to a leaf.
    if (status.status === "met") return { kind: "yes" };
    return { kind: "resolved", status: status.status, note: status.note };
  }
  const open = trail.find((row) => row.answer === null);
  if (open === undefined || open.node_id === "root") return { kind: "unanswered" };
  return { kind: "in_followup", nodeId: open.node_id };
}

function markState(mark: boolean | null): ItemState {
  if (mark === null) return { kind: "unanswered" };
  if (mark) return { kind: "yes" };
  return { kind: "resolved", status: "absent", note: "" };
}

export function buildViewModel(form: FormView, session: SessionView): FormViewModel {
  const sections: SectionVM[] = [];
  const byStandard = new Map<string, SectionVM>();
  let answered = 0;

  for (const item of form.items) {
    const standardId = item.provenance.length > 0 ? item.provenance[0][0] : "ad hoc";
    let section = byStandard.get(standardId);
    if (section === undefined) {
      section = { standardId, items: [] };
      byStandard.set(standardId, section);
      sections.push(section);
    }

    let vm: ItemVM;
    if (item.category === "essential") {
      const trail = session.trail[item.key] ?? [];
      vm = {
        item,
        state: essentialState(trail, session.statuses[item.key] ?? null),
        trail,
        mark: null,
      };
    } else {
      const mark = item.key in session.marks ? session.marks[item.key] : null;
      vm = { item, state: markState(mark), trail: [], mark };
    }
    if (vm.state.kind !== "unanswered" && vm.state.kind !== "in_followup") answered += 1;
    section.items.push(vm);
  }

  return {
    formId: form.form_id,
    sessionId: session.session_id,
    reviewerId: session.reviewer_id,
    sessionState: session.state,
    sections,
    progress: form.items.length === 0 ? 1 : answered / form.items.length,
    missing: session.missing,
    comments: session.comments,
    maxNoteLength: session.max_note_length,
  };
}

// The prompts the screen must show: exactly the session's revealed set.
export function visiblePromptKeys(session: SessionView): Set<string> {
  const out = new Set<string>();
  for (const [key, nodeId] of session.revealed) out.add(`${key}::${nodeId}`);
  return out;
}
