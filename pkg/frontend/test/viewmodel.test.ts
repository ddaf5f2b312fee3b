import { describe, expect, it } from "vitest";

import type { FormView, SessionView } from "../src/api";
import { buildViewModel, visiblePromptKeys } from "../src/viewmodel";

const FORM: FormView = {
  form_id: "form-x",
  source_standards: [
    { standard_id: "general", version: "0.3.0" },
    { standard_id: "experiment", version: "0.2.0" },
  ],
  items: [
    {
      key: "general.states-a-question",
      text: "states a clear research question",
      category: "essential",
      provenance: [["general", "states-a-question"]],
      followup_tree_ref: null,
    },
    {
      key: "experiment.uses-random-assignment",
      text: "uses random assignment",
      category: "essential",
      provenance: [["experiment", "uses-random-assignment"]],
      followup_tree_ref: "random-assignment",
    },
    {
      key: "experiment.shares-materials",
      text: "shares study materials",
      category: "desirable",
      provenance: [["experiment", "shares-materials"]],
      followup_tree_ref: null,
    },
  ],
};

function session(partial: Partial<SessionView>): SessionView {
  return {
    session_id: "sub-1-rev-a",
    reviewer_id: "rev-a",
    venue_kind: "journal",
    form_id: "form-x",
    state: "open",
    revealed: [
      ["experiment.uses-random-assignment", "root"],
      ["general.states-a-question", "root"],
    ],
    trail: {
      "general.states-a-question": [
        { node_id: "root", prompt: "states a clear research question", answer_kind: "yes_no", answer: null },
      ],
      "experiment.uses-random-assignment": [
        { node_id: "root", prompt: "uses random assignment", answer_kind: "yes_no", answer: null },
      ],
    },
    current_prompts: {},
    max_note_length: 2000,
    statuses: {
      "general.states-a-question": null,
      "experiment.uses-random-assignment": null,
    },
    marks: {},
    comments: "",
    missing: ["general.states-a-question"],
    ...partial,
  };
}

describe("buildViewModel", () => {
  it("groups items into sections by source standard, in form order", () => {
    const vm = buildViewModel(FORM, session({}));
    expect(vm.sections.map((s) => s.standardId)).toEqual(["general", "experiment"]);
    expect(vm.sections[1].items.map((i) => i.item.key)).toEqual([
      "experiment.uses-random-assignment",
      "experiment.shares-materials",
    ]);
  });

  it("derives the four item states from statuses and the trail", () => {
    const view = session({
      trail: {
        "general.states-a-question": [
          { node_id: "root", prompt: "q", answer_kind: "yes_no", answer: "yes" },
        ],
        "experiment.uses-random-assignment": [
          { node_id: "root", prompt: "q", answer_kind: "yes_no", answer: "no" },
          { node_id: "justified", prompt: "why", answer_kind: "yes_no", answer: null },
        ],
      },
      statuses: {
        "general.states-a-question": { status: "met", note: "" },
        "experiment.uses-random-assignment": null,
      },
    });
    const vm = buildViewModel(FORM, view);
    const states = new Map(
      vm.sections.flatMap((s) => s.items.map((i) => [i.item.key, i.state])),
    );
    expect(states.get("general.states-a-question")).toEqual({ kind: "yes" });
    expect(states.get("experiment.uses-random-assignment")).toEqual({
      kind: "in_followup",
      nodeId: "justified",
    });
    expect(states.get("experiment.shares-materials")).toEqual({ kind: "unanswered" });
  });

  it("treats a non-met status as resolved and carries the note", () => {
    const view = session({
      statuses: {
        "general.states-a-question": null,
        "experiment.uses-random-assignment": {
          status: "fixable_revision",
          note: "assignment procedure is not described",
        },
      },
    });
    const vm = buildViewModel(FORM, view);
    const item = vm.sections[1].items[0];
    expect(item.state).toEqual({
      kind: "resolved",
      status: "fixable_revision",
      note: "assignment procedure is not described",
    });
  });

  it("computes the progress fraction over every item, marks included", () => {
    const empty = buildViewModel(FORM, session({}));
    expect(empty.progress).toBe(0);

    const partial = buildViewModel(
      FORM,
      session({
        statuses: {
          "general.states-a-question": { status: "met", note: "" },
          "experiment.uses-random-assignment": null,
        },
        marks: { "experiment.shares-materials": false },
      }),
    );
    expect(partial.progress).toBeCloseTo(2 / 3, 12);

    const done = buildViewModel(
      FORM,
      session({
        state: "complete",
        statuses: {
          "general.states-a-question": { status: "met", note: "" },
          "experiment.uses-random-assignment": { status: "justified_deviation", note: "" },
        },
        marks: { "experiment.shares-materials": true },
        missing: [],
      }),
    );
    expect(done.progress).toBe(1);
  });

  it("maps the revealed pairs to widget keys", () => {
    const keys = visiblePromptKeys(session({}));
    expect(keys).toEqual(
      new Set([
        "general.states-a-question::root",
        "experiment.uses-random-assignment::root",
      ]),
    );
  });
});
