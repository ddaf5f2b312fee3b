// Live-service tests: the form talks to a real venue service spawned for
// this file. Reveal parity is asserted against the API after every click.

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { renderForm, FormController } from "../src/form";
import { startService, LiveService } from "./service.js";

let service: LiveService;
let client: ApiClient;

beforeAll(async () => {
  service = await startService();
  client = new ApiClient(service.baseUrl);
});

afterAll(() => {
  service.stop();
});

async function waitFor(check: () => boolean, ms = 8000): Promise<void> {
  const deadline = Date.now() + ms;
  while (!check()) {
    if (Date.now() > deadline) throw new Error("condition not met in time");
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
}

async function newReviewSession(title: string): Promise<string> {
  const submission = await client.createSubmission({
    title,
    methods: ["experiment"],
  });
  const { checks } = await client.triageChecks();
  const results: Record<string, boolean> = {};
  for (const text of checks) results[text] = true;
  await client.triage(submission.submission_id, "editor-1", results);
  const { session_ids } = await client.openReviews(submission.submission_id, [
    "rev-a",
    "rev-b",
  ]);
  return session_ids[0];
}

function mount(): HTMLElement {
  const container = document.createElement("div");
  document.body.appendChild(container);
  return container;
}

async function assertParity(controller: FormController, sessionId: string) {
  const view = await client.session(sessionId);
  const expected = new Set(view.revealed.map(([key, node]) => `${key}::${node}`));
  expect(controller.visiblePrompts()).toEqual(expected);
}

function followupWidgets(controller: FormController): Element[] {
  return Array.from(controller.element.querySelectorAll("[data-prompt]")).filter(
    (node) => !(node.getAttribute("data-prompt") as string).endsWith("::root"),
  );
}

function clickAnswer(controller: FormController, promptKey: string, label: string) {
  const card = controller.element.querySelector(`[data-prompt="${promptKey}"]`);
  expect(card, `prompt ${promptKey} should be on screen`).not.toBeNull();
  const button = Array.from(card!.querySelectorAll("button")).find(
    (b) => b.textContent === label,
  );
  expect(button, `button ${label} on ${promptKey}`).not.toBeUndefined();
  (button as HTMLElement).click();
}

describe("render_form", () => {
  it("an all-yes pass shows zero follow-up widgets and submits at 100%", async () => {
    const sessionId = await newReviewSession("all yes paper");
    const controller = await renderForm(mount(), client, sessionId);
    await assertParity(controller, sessionId);
    expect(followupWidgets(controller)).toHaveLength(0);

    const rootPrompts = Array.from(
      controller.element.querySelectorAll("[data-prompt]"),
    ).map((node) => node.getAttribute("data-prompt") as string);
    for (const promptKey of rootPrompts) {
      clickAnswer(controller, promptKey, "yes");
      await waitFor(() => {
        const card = controller.element.querySelector(`[data-prompt="${promptKey}"]`);
        return card !== null && card.querySelector(".answered") !== null;
      });
      await assertParity(controller, sessionId);
      expect(followupWidgets(controller)).toHaveLength(0);
    }

    // Mark every desirable/extraordinary item present to finish the session.
    const markable = Array.from(
      controller.element.querySelectorAll(".item.desirable, .item.extraordinary"),
    ).map((node) => node.getAttribute("data-item") as string);
    expect(markable.length).toBeGreaterThan(0);
    for (const itemKey of markable) {
      const row = controller.element.querySelector(`[data-item="${itemKey}"]`);
      const present = Array.from(row!.querySelectorAll("button")).find(
        (b) => b.textContent === "present",
      );
      (present as HTMLElement).click();
      await waitFor(() => {
        const updated = controller.element.querySelector(`[data-item="${itemKey}"]`);
        return updated?.querySelector("button.selected") != null;
      });
    }

    const progress = controller.element.querySelector('[data-role="progress"]');
    expect(progress?.textContent).toBe("100%");
    const submit = controller.element.querySelector(
      '[data-role="submit"]',
    ) as HTMLButtonElement;
    expect(submit.disabled).toBe(false);
    submit.click();
    await waitFor(() => controller.vm().sessionState === "complete");
    const view = await client.session(sessionId);
    expect(view.state).toBe("complete");
  });

  it("ticking no on the random-assignment item walks its follow-up tree", async () => {
    const sessionId = await newReviewSession("no assignment paper");
    const controller = await renderForm(mount(), client, sessionId);
    const itemKey = "experiment.uses-random-assignment";

    clickAnswer(controller, `${itemKey}::root`, "no");
    await waitFor(
      () =>
        controller.element.querySelector(`[data-prompt="${itemKey}::justified"]`) !==
        null,
    );
    await assertParity(controller, sessionId);
    const justification = controller.element.querySelector(
      `[data-prompt="${itemKey}::justified"] .prompt-text`,
    );
    expect(justification?.textContent).toContain(
      "reasonable justification for the lack of random assignment",
    );

    clickAnswer(controller, `${itemKey}::justified`, "no");
    await waitFor(
      () =>
        controller.element.querySelector(`[data-prompt="${itemKey}::fixable"]`) !==
        null,
    );
    await assertParity(controller, sessionId);

    clickAnswer(controller, `${itemKey}::fixable`, "yes");
    await waitFor(
      () =>
        controller.element.querySelector(`[data-prompt="${itemKey}::explain"]`) !==
        null,
    );
    const card = controller.element.querySelector(
      `[data-prompt="${itemKey}::explain"]`,
    )!;
    const box = card.querySelector("textarea") as HTMLTextAreaElement;
    expect(box.maxLength).toBeGreaterThan(0);
    box.value = "the assignment procedure is unreported";
    (card.querySelector("button") as HTMLElement).click();
    await waitFor(() => {
      const row = controller.element.querySelector(`[data-item="${itemKey}"]`);
      return row?.getAttribute("data-state") === "resolved";
    });
    await assertParity(controller, sessionId);

    const row = controller.element.querySelector(`[data-item="${itemKey}"]`)!;
    expect(row.querySelector(".status-chip")?.textContent).toBe("fixable_revision");
    expect(row.querySelector(".status-note")?.textContent).toBe(
      "the assignment procedure is unreported",
    );
  });

  it("a failed request keeps the screen and the draft, and shows the error", async () => {
    const sessionId = await newReviewSession("contested edit paper");
    const controller = await renderForm(mount(), client, sessionId);

    const comments = controller.element.querySelector(
      '[data-role="comments"]',
    ) as HTMLTextAreaElement;
    comments.value = "draft paragraph the reviewer has not submitted";

    // Another window finishes the session behind this screen's back.
    const view = await client.session(sessionId);
    for (const item of Object.keys(view.trail)) {
      await client.answer(sessionId, item, "root", "yes");
    }
    const refreshed = await client.session(sessionId);
    for (const key of refreshed.missing) {
      await client.mark(sessionId, key, true);
    }
    await client.complete(sessionId, "");

    // The stale screen still shows root prompts; clicking one must fail
    // without wiping the page.
    const promptKey = controller
      .element.querySelector("[data-prompt]")!
      .getAttribute("data-prompt") as string;
    clickAnswer(controller, promptKey, "yes");
    await waitFor(() => controller.lastError() !== null);
    expect(controller.lastError()).toContain("session_closed");
    const banner = controller.element.querySelector('[data-role="error"]');
    expect(banner?.textContent).toContain("session_closed");

    const draft = controller.element.querySelector(
      '[data-role="comments"]',
    ) as HTMLTextAreaElement;
    expect(draft.value).toBe("draft paragraph the reviewer has not submitted");
  });
});
