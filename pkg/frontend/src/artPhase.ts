/**
 * Art-making phase view: semantic-brush canvas, agent chat, style picker,
 * generate button with job polling and a co-creative preview.
 */

import { ApiClient, ApiError } from "./api.js";
import { DEFAULT_BRUSHES, PolygonBrush, paintRegions, type BrushEntry } from "./canvasModel.js";
import { addBubble, addUtterance } from "./chat.js";
import type { Job, SessionCreateResponse } from "./types.js";

const STYLES = ["watercolor painting", "oil painting", "sketch", "flat illustration"];

export interface ArtPhaseCallbacks {
  onArtworkGenerated?: (job: Job) => void;
}

export class ArtPhaseView {
  readonly root: HTMLElement;
  readonly chatLog: HTMLElement;
  readonly canvas: HTMLCanvasElement;
  readonly preview: HTMLElement;
  readonly styleSelect: HTMLSelectElement;
  readonly generateButton: HTMLButtonElement;
  readonly notice: HTMLElement;

  private brush: PolygonBrush;
  private regions: { polygon: number[][]; color: string }[] = [];
  private brushByConcept = new Map<string, BrushEntry>();
  private pollTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private api: ApiClient,
    private sessionId: string,
    private size: { width: number; height: number },
    private callbacks: ArtPhaseCallbacks = {},
    private pollIntervalMs = 300,
  ) {
    this.root = document.createElement("section");
    this.root.className = "art-phase";

    this.chatLog = document.createElement("div");
    this.chatLog.className = "chat-log";

    this.canvas = document.createElement("canvas");
    this.canvas.width = size.width;
    this.canvas.height = size.height;
    this.canvas.className = "drawing-canvas";

    this.preview = document.createElement("div");
    this.preview.className = "preview";

    this.styleSelect = document.createElement("select");
    for (const style of STYLES) {
      const option = document.createElement("option");
      option.value = style;
      option.textContent = style;
      this.styleSelect.appendChild(option);
    }

    this.generateButton = document.createElement("button");
    this.generateButton.textContent = "Generate";
    this.generateButton.addEventListener("click", () => void this.generate());

    this.notice = document.createElement("div");
    this.notice.className = "notice";

    const toolbox = document.createElement("div");
    toolbox.className = "toolbox";
    for (const entry of DEFAULT_BRUSHES) {
      this.brushByConcept.set(entry.concept, entry);
      const button = document.createElement("button");
      button.className = "brush";
      button.dataset.concept = entry.concept;
      button.textContent = entry.concept;
      button.style.borderColor = entry.color;
      button.addEventListener("click", () => this.selectBrush(entry.concept));
      toolbox.appendChild(button);
    }

    this.brush = new PolygonBrush(DEFAULT_BRUSHES[0].concept, size.width, size.height);
    this.bindPointerEvents();

    this.root.append(toolbox, this.canvas, this.preview, this.styleSelect, this.generateButton, this.notice, this.chatLog);
  }

  /** Render the opening message / task the session was created with. */
  showSessionIntro(created: SessionCreateResponse): void {
    for (const utterance of created.session.art_phase.transcript) {
      addUtterance(this.chatLog, utterance);
    }
  }

  selectBrush(concept: string): void {
    this.brush = new PolygonBrush(concept, this.size.width, this.size.height);
  }

  private bindPointerEvents(): void {
    this.canvas.addEventListener("pointerdown", (event) => {
      this.brush.begin(event.offsetX, event.offsetY);
    });
    this.canvas.addEventListener("pointermove", (event) => {
      this.brush.move(event.offsetX, event.offsetY);
    });
    this.canvas.addEventListener("pointerup", () => {
      const polygon = this.brush.end();
      if (polygon) void this.submitStroke(this.brush.concept, polygon);
    });
  }

  /** POST the stroke; the agent's question (if any) lands in the chat. */
  async submitStroke(concept: string, polygon: number[][]): Promise<void> {
    const response = await this.api.postStroke(this.sessionId, concept, polygon);
    const entry = this.brushByConcept.get(response.region.concept);
    this.regions.push({
      polygon: response.region.polygon,
      color: entry?.color ?? "rgb(128,128,128)",
    });
    const context = this.canvas.getContext("2d");
    if (context) paintRegions(context, this.regions);
    addUtterance(this.chatLog, response.draw_event);
    if (response.agent_utterance) {
      addUtterance(this.chatLog, response.agent_utterance);
    }
  }

  async say(text: string): Promise<void> {
    await this.api.postArtUtterance(this.sessionId, text);
    addBubble(this.chatLog, "client", text);
  }

  async generate(): Promise<void> {
    this.generateButton.disabled = true;
    this.preview.textContent = "";
    const spinner = document.createElement("div");
    spinner.className = "spinner";
    spinner.textContent = "generating…";
    this.preview.appendChild(spinner);
    try {
      const response = await this.api.generate(this.sessionId, this.styleSelect.value);
      this.pollUntilDone(response.job_id);
    } catch (error) {
      this.generateButton.disabled = false;
      spinner.remove();
      this.showNotice(error instanceof ApiError ? error.message : "generation failed");
    }
  }

  private pollUntilDone(jobId: string): void {
    const poll = async () => {
      const job = await this.api.pollJob(jobId);
      if (job.status === "completed" && job.generated_image_ref) {
        this.showPreview(job);
        this.callbacks.onArtworkGenerated?.(job);
      } else if (job.status === "failed") {
        this.generateButton.disabled = false;
        this.preview.textContent = "";
        this.showNotice(`generation failed: ${job.failure_reason ?? "unknown"} — retry?`);
      } else {
        this.pollTimer = setTimeout(() => void poll(), this.pollIntervalMs);
      }
    };
    void poll();
  }

  private showPreview(job: Job): void {
    this.generateButton.disabled = false;
    this.preview.textContent = "";
    const image = document.createElement("img");
    image.src = this.api.fileUrl(job.generated_image_ref as string);
    image.alt = "co-creative preview";
    image.dataset.jobId = job.job_id;
    this.preview.appendChild(image);
  }

  private showNotice(text: string): void {
    // non-blocking: drawing continues regardless
    this.notice.textContent = text;
  }

  dispose(): void {
    if (this.pollTimer !== null) clearTimeout(this.pollTimer);
  }
}
