// Reviewer-facing dynamic form. The screen is re-rendered from the API
// response after every successful action, so what is visible is always the
// service's view of the session, never a local guess. Failed requests leave
// the DOM untouched (drafts in text boxes survive) and surface a banner.

import { ApiClient, ApiError, FormView, SessionView, TrailRow } from "./api.js";
import { buildViewModel, FormViewModel, ItemVM } from "./viewmodel.js";

export interface FormController {
  element: HTMLElement;
  refresh(): Promise<void>;
  vm(): FormViewModel;
  visiblePrompts(): Set<string>;
  lastError(): string | null;
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

export async function renderForm(
  container: HTMLElement,
  client: ApiClient,
  sessionId: string,
): Promise<FormController> {
  const doc = container.ownerDocument;
  let session = await client.session(sessionId);
  const form: FormView = await client.form(session.form_id);
  let viewModel = buildViewModel(form, session);
  let errorText: string | null = null;

  const root = el(doc, "div", "review-form");
  container.appendChild(root);

  function showError(err: unknown): void {
    errorText =
      err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
    const banner = root.querySelector('[data-role="error"]');
    if (banner) banner.textContent = errorText;
  }

  async function act(run: () => Promise<SessionView>): Promise<void> {
    try {
      session = await run();
      errorText = null;
      render();
    } catch (err) {
      showError(err);
    }
  }

  function promptCard(vm: ItemVM, row: TrailRow): HTMLElement {
    const key = vm.item.key;
    const card = el(doc, "div", "prompt");
    card.setAttribute("data-prompt", `${key}::${row.node_id}`);
    card.appendChild(el(doc, "p", "prompt-text", row.prompt));

    if (row.answer !== null) {
      card.appendChild(el(doc, "span", "answered", row.answer));
      return card;
    }
    if (row.answer_kind === "yes_no") {
      for (const value of ["yes", "no"]) {
        const button = el(doc, "button", "answer-btn", value);
        button.addEventListener("click", () => {
          void act(() => client.answer(session.session_id, key, row.node_id, value));
        });
        card.appendChild(button);
      }
    } else {
      const box = el(doc, "textarea", "note-box");
      box.maxLength = viewModel.maxNoteLength;
      const save = el(doc, "button", "answer-btn", "save");
      save.addEventListener("click", () => {
        void act(() => client.answer(session.session_id, key, row.node_id, box.value));
      });
      card.appendChild(box);
      card.appendChild(save);
    }
    return card;
  }

  function essentialRow(vm: ItemVM): HTMLElement {
    const row = el(doc, "div", "item essential");
    row.setAttribute("data-item", vm.item.key);
    row.setAttribute("data-state", vm.state.kind);
    if (vm.state.kind === "resolved") {
      row.appendChild(
        el(doc, "span", "status-chip", `${vm.state.status}`),
      );
      if (vm.state.note) row.appendChild(el(doc, "p", "status-note", vm.state.note));
    } else if (vm.state.kind === "yes") {
      row.appendChild(el(doc, "span", "status-chip", "met"));
    }
    for (const trailRow of vm.trail) row.appendChild(promptCard(vm, trailRow));
    return row;
  }

  function markRow(vm: ItemVM): HTMLElement {
    const row = el(doc, "div", `item ${vm.item.category}`);
    row.setAttribute("data-item", vm.item.key);
    row.appendChild(el(doc, "p", "item-text", vm.item.text));
    for (const [label, present] of [
      ["present", true],
      ["absent", false],
    ] as const) {
      const button = el(doc, "button", "mark-btn", label);
      if (vm.mark === present) button.classList.add("selected");
      button.addEventListener("click", () => {
        void act(() => client.mark(session.session_id, vm.item.key, present));
      });
      row.appendChild(button);
    }
    return row;
  }

  function render(): void {
    viewModel = buildViewModel(form, session);
    root.textContent = "";

    const header = el(doc, "div", "form-header");
    header.appendChild(
      el(doc, "h2", undefined, `Review form ${viewModel.formId}`),
    );
    header.appendChild(
      el(doc, "p", "reviewer", `Reviewer: ${viewModel.reviewerId}`),
    );
    const progress = el(doc, "p", "progress");
    progress.setAttribute("data-role", "progress");
    progress.textContent = `${Math.round(viewModel.progress * 100)}%`;
    header.appendChild(progress);
    const banner = el(doc, "p", "error-banner", errorText ?? "");
    banner.setAttribute("data-role", "error");
    header.appendChild(banner);
    root.appendChild(header);

    for (const section of viewModel.sections) {
      const block = el(doc, "section", "standard-section");
      block.setAttribute("data-standard", section.standardId);
      block.appendChild(el(doc, "h3", undefined, section.standardId));
      for (const vm of section.items) {
        block.appendChild(
          vm.item.category === "essential" ? essentialRow(vm) : markRow(vm),
        );
      }
      root.appendChild(block);
    }

    const footer = el(doc, "div", "form-footer");
    footer.appendChild(
      el(doc, "h4", undefined, "Comments to the authors (non-binding)"),
    );
    const comments = el(doc, "textarea", "comments-box");
    comments.setAttribute("data-role", "comments");
    comments.value = viewModel.comments;
    footer.appendChild(comments);

    const submit = el(doc, "button", "submit-btn", "Submit review");
    submit.setAttribute("data-role", "submit");
    submit.disabled =
      viewModel.sessionState !== "open" || viewModel.missing.length > 0;
    submit.addEventListener("click", () => {
      void act(() => client.complete(session.session_id, comments.value));
    });
    footer.appendChild(submit);
    if (viewModel.sessionState === "complete") {
      footer.appendChild(el(doc, "p", "done-note", "Review submitted."));
    }
    root.appendChild(footer);
  }

  render();

  return {
    element: root,
    async refresh(): Promise<void> {
      await act(() => client.session(sessionId));
    },
    vm: () => viewModel,
    visiblePrompts(): Set<string> {
      const out = new Set<string>();
      root.querySelectorAll("[data-prompt]").forEach((node) => {
        out.add(node.getAttribute("data-prompt") as string);
      });
      return out;
    },
    lastError: () => errorText,
  };
}
