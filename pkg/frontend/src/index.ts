export { ApiClient, ApiError } from "./api.js";
export type {
  AgreementView,
  ChecklistResponse,
  FormItemView,
  FormView,
  LetterResponse,
  SessionView,
  SubmissionView,
  TrailRow,
  VerdictView,
} from "./api.js";
export { buildViewModel, visiblePromptKeys } from "./viewmodel.js";
export type { FormViewModel, ItemState, ItemVM, SectionVM } from "./viewmodel.js";
export { renderForm } from "./form.js";
export type { FormController } from "./form.js";
export { renderDashboard } from "./dashboard.js";
export type { DashboardController } from "./dashboard.js";
export { renderChecklist } from "./checklist.js";
