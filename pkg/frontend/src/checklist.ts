// Author-facing pre-submission checklist: the composed items, no follow-up
// machinery, grouped by category.

import { ApiClient, Category } from "./api.js";

const ORDER: Category[] = ["essential", "desirable", "extraordinary"];

export async function renderChecklist(
  container: HTMLElement,
  client: ApiClient,
  submissionId: string,
): Promise<HTMLElement> {
  const doc = container.ownerDocument;
  const checklist = await client.checklist(submissionId);
  const root = doc.createElement("div");
  root.className = "author-checklist";
  container.appendChild(root);

  const heading = doc.createElement("h2");
  heading.textContent = `Checklist for form ${checklist.form_id}`;
  root.appendChild(heading);

  for (const category of ORDER) {
    const entries = checklist.entries.filter((e) => e.category === category);
    if (entries.length === 0) continue;
    const title = doc.createElement("h3");
    title.textContent = category;
    root.appendChild(title);
    const list = doc.createElement("ul");
    list.setAttribute("data-category", category);
    for (const entry of entries) {
      const li = doc.createElement("li");
      li.setAttribute("data-item", entry.key);
      li.textContent = entry.text;
      list.appendChild(li);
    }
    root.appendChild(list);
  }
  return root;
}
