/**
 * Therapist console: principle editor with drag-to-reorder, task and
 * opening-message editors, usage dashboard, record viewer, summary panel.
 *
 * Edits are optimistic: the list re-renders immediately and rolls back if
 * the server rejects the change. A 403 anywhere flips the console into a
 * read-only banner state.
 */

import { ApiClient, ApiError } from "./api.js";
import type { HistoryRecord, Overview, Principle, Profile } from "./types.js";

export class TherapistConsole {
  readonly root: HTMLElement;
  readonly principleList: HTMLOListElement;
  readonly taskInput: HTMLTextAreaElement;
  readonly openingInput: HTMLTextAreaElement;
  readonly saveTaskButton: HTMLButtonElement;
  readonly saveOpeningButton: HTMLButtonElement;
  readonly versionBadge: HTMLElement;
  readonly banner: HTMLElement;
  readonly dashboard: HTMLElement;
  readonly recordPanel: HTMLElement;

  profile: Profile | null = null;
  readOnly = false;
  /** resolves after the most recent commit settles (tests await this) */
  lastCommit: Promise<void> = Promise.resolve();

  private dragIndex: number | null = null;

  constructor(
    private api: ApiClient,
    private clientId: string,
  ) {
    this.root = document.createElement("section");
    this.root.className = "therapist-console";

    this.banner = document.createElement("div");
    this.banner.className = "banner";

    this.versionBadge = document.createElement("span");
    this.versionBadge.className = "version-badge";

    this.principleList = document.createElement("ol");
    this.principleList.className = "principles";

    this.taskInput = document.createElement("textarea");
    this.taskInput.className = "task-input";
    this.saveTaskButton = document.createElement("button");
    this.saveTaskButton.textContent = "Save task";
    this.saveTaskButton.addEventListener("click", () => {
      this.lastCommit = this.saveTask();
    });

    this.openingInput = document.createElement("textarea");
    this.openingInput.className = "opening-input";
    this.saveOpeningButton = document.createElement("button");
    this.saveOpeningButton.textContent = "Save opening message";
    this.saveOpeningButton.addEventListener("click", () => {
      this.lastCommit = this.saveOpening();
    });

    this.dashboard = document.createElement("div");
    this.dashboard.className = "dashboard";

    this.recordPanel = document.createElement("div");
    this.recordPanel.className = "record-panel";

    this.root.append(
      this.banner,
      this.versionBadge,
      this.principleList,
      this.taskInput,
      this.saveTaskButton,
      this.openingInput,
      this.saveOpeningButton,
      this.dashboard,
      this.recordPanel,
    );
  }

  async load(): Promise<void> {
    try {
      this.setProfile(await this.api.getProfile(this.clientId));
    } catch (error) {
      if (error instanceof ApiError && error.status === 403) {
        this.enterReadOnly();
        return;
      }
      throw error;
    }
  }

  setProfile(profile: Profile): void {
    this.profile = profile;
    this.versionBadge.textContent = `v${profile.version}`;
    this.taskInput.value = profile.homework_task;
    this.openingInput.value = profile.opening_message;
    this.renderPrinciples();
  }

  private enterReadOnly(): void {
    this.readOnly = true;
    this.banner.textContent = "Read-only: you are not this client's assigned therapist.";
    for (const button of [this.saveTaskButton, this.saveOpeningButton]) {
      button.disabled = true;
    }
  }

  private renderPrinciples(): void {
    this.principleList.textContent = "";
    if (!this.profile) return;
    const ordered = [...this.profile.principles].sort((a, b) => a.position - b.position);
    ordered.forEach((principle, index) => {
      this.principleList.appendChild(this.principleRow(principle, index));
    });
  }

  private principleRow(principle: Principle, index: number): HTMLLIElement {
    const row = document.createElement("li");
    row.className = "principle";
    row.draggable = !this.readOnly;
    row.dataset.principleId = principle.principle_id;
    row.dataset.position = String(principle.position);

    const statement = document.createElement("span");
    statement.className = "statement";
    statement.textContent = principle.statement;
    const question = document.createElement("span");
    question.className = "sample-question";
    question.textContent = principle.example_questions[0] ?? "";
    row.append(statement, question);

    row.addEventListener("dragstart", () => {
      this.dragIndex = index;
    });
    row.addEventListener("dragover", (event) => event.preventDefault());
    row.addEventListener("drop", () => {
      if (this.dragIndex !== null && this.dragIndex !== index) {
        this.lastCommit = this.movePrinciple(this.dragIndex, index);
      }
      this.dragIndex = null;
    });
    return row;
  }

  /**
   * Move a principle from one list index to another and commit the
   * reorder as a permutation (new order expressed in old 1-based
   * positions), optimistically re-rendering and rolling back on error.
   */
  async movePrinciple(fromIndex: number, toIndex: number): Promise<void> {
    if (!this.profile || this.readOnly) return;
    const before = this.profile;
    const oldPositions = [...this.profile.principles]
      .sort((a, b) => a.position - b.position)
      .map((p) => p.position);
    const permutation = [...oldPositions];
    const [moved] = permutation.splice(fromIndex, 1);
    permutation.splice(toIndex, 0, moved);

    // optimistic: render the new order immediately
    const optimistic: Profile = {
      ...before,
      principles: permutation.map((oldPosition, newIndex) => {
        const principle = before.principles.find((p) => p.position === oldPosition)!;
        return { ...principle, position: newIndex + 1 };
      }),
    };
    this.setProfile(optimistic);

    try {
      this.setProfile(await this.api.reorderPrinciples(this.clientId, permutation));
    } catch (error) {
      this.setProfile(before); // roll back
      if (error instanceof ApiError && error.status === 403) this.enterReadOnly();
    }
  }

  async saveTask(): Promise<void> {
    if (!this.profile || this.readOnly) return;
    const before = this.profile;
    try {
      this.setProfile(await this.api.setTask(this.clientId, this.taskInput.value));
    } catch (error) {
      this.setProfile(before);
      if (error instanceof ApiError && error.status === 403) this.enterReadOnly();
    }
  }

  async saveOpening(): Promise<void> {
    if (!this.profile || this.readOnly) return;
    const before = this.profile;
    try {
      this.setProfile(await this.api.setOpeningMessage(this.clientId, this.openingInput.value));
    } catch (error) {
      this.setProfile(before);
      if (error instanceof ApiError && error.status === 403) this.enterReadOnly();
    }
  }

  // -- dashboard ---------------------------------------------------------

  renderOverview(overview: Overview, brushRows: [string, number][]): void {
    this.dashboard.textContent = "";

    const dates = document.createElement("ul");
    dates.className = "date-distribution";
    for (const [date, count] of Object.entries(overview.sessions_by_date)) {
      const item = document.createElement("li");
      item.dataset.date = date;
      item.textContent = `${date}: ${count}`;
      dates.appendChild(item);
    }

    const hours = document.createElement("div");
    hours.className = "hour-histogram";
    overview.sessions_by_hour.forEach((count, hour) => {
      const bar = document.createElement("div");
      bar.className = "bar";
      bar.dataset.hour = String(hour);
      bar.dataset.count = String(count);
      bar.style.height = `${count * 8}px`;
      hours.appendChild(bar);
    });

    const brush = document.createElement("table");
    brush.className = "brush-table";
    for (const [concept, count] of brushRows) {
      const row = brush.insertRow();
      row.insertCell().textContent = concept;
      row.insertCell().textContent = String(count);
    }

    this.dashboard.append(dates, hours, brush);
  }

  // -- record viewer -------------------------------------------------------

  renderRecord(record: HistoryRecord): void {
    this.recordPanel.textContent = "";

    const gallery = document.createElement("div");
    gallery.className = "gallery";
    const addImage = (ref: string | null, label: string) => {
      if (!ref) return;
      const image = document.createElement("img");
      image.src = this.api.fileUrl(ref);
      image.alt = label;
      image.dataset.role = label;
      gallery.appendChild(image);
    };
    addImage(record.control_image_ref, "segments");
    for (const frame of record.process_frames) addImage(frame, "process-frame");
    addImage(record.artwork_ref, "artwork");

    const transcript = document.createElement("div");
    transcript.className = "transcript";
    for (const utterance of [...record.dialogue.art, ...record.dialogue.discussion]) {
      const line = document.createElement("p");
      line.dataset.speaker = utterance.speaker;
      line.textContent = utterance.text;
      transcript.appendChild(line);
    }

    const summary = document.createElement("div");
    summary.className = "summary-panel";
    const artSummary = document.createElement("p");
    artSummary.className = "art-summary";
    artSummary.textContent = record.art_summary;
    const discussionSummary = document.createElement("p");
    discussionSummary.className = "discussion-summary";
    discussionSummary.textContent = record.discussion_summary;
    const questions = document.createElement("ol");
    questions.className = "therapist-questions";
    for (const question of record.therapist_questions) {
      const item = document.createElement("li");
      item.textContent = question;
      questions.appendChild(item);
    }
    summary.append(artSummary, discussionSummary, questions);

    this.recordPanel.append(gallery, transcript, summary);
  }
}
