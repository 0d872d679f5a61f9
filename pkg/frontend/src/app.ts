/**
 * Entry point: wires the client homework flow (art phase -> discussion) and
 * the therapist console onto one page, driven entirely by the 15-endpoint
 * API. The discussion view only becomes reachable once the session has at
 * least one generated artwork.
 */

import { ApiClient } from "./api.js";
import { ArtPhaseView } from "./artPhase.js";
import { VoicePlayer } from "./audio.js";
import { DiscussionView } from "./discussion.js";
import { TherapistConsole } from "./therapist.js";
import type { Job } from "./types.js";

export interface AppConfig {
  baseUrl: string;
  token: string;
  role: "client" | "therapist";
  clientId: string;
  canvas?: { width: number; height: number };
}

export class HomeworkApp {
  readonly root: HTMLElement;
  readonly phaseSwitch: HTMLButtonElement;
  artPhase: ArtPhaseView | null = null;
  discussion: DiscussionView | null = null;
  therapist: TherapistConsole | null = null;

  private api: ApiClient;
  private voice = new VoicePlayer();
  private sessionId: string | null = null;
  private generatedArtwork: Job | null = null;

  constructor(private config: AppConfig) {
    this.api = new ApiClient({ baseUrl: config.baseUrl, token: config.token });
    this.root = document.createElement("main");
    this.phaseSwitch = document.createElement("button");
    this.phaseSwitch.textContent = "Discuss your artwork";
    this.phaseSwitch.disabled = true; // until an artwork exists
    this.phaseSwitch.addEventListener("click", () => void this.enterDiscussion());
  }

  async start(): Promise<void> {
    if (this.config.role === "therapist") {
      this.therapist = new TherapistConsole(this.api, this.config.clientId);
      await this.therapist.load();
      const [overview, brush] = await Promise.all([
        this.api.getOverview(this.config.clientId),
        this.api.getBrushStats(this.config.clientId),
      ]);
      this.therapist.renderOverview(overview, brush.rows);
      this.root.appendChild(this.therapist.root);
      return;
    }

    const created = await this.api.createSession(this.config.clientId);
    this.sessionId = created.session.session_id;
    const size = this.config.canvas ?? { width: 512, height: 512 };
    this.artPhase = new ArtPhaseView(this.api, this.sessionId, size, {
      onArtworkGenerated: (job) => {
        this.generatedArtwork = job;
        this.phaseSwitch.disabled = false;
      },
    });
    this.artPhase.showSessionIntro(created);
    this.root.append(this.artPhase.root, this.phaseSwitch);
  }

  /** Reachable only after at least one artwork was generated. */
  async enterDiscussion(): Promise<void> {
    if (!this.sessionId || !this.generatedArtwork) return;
    if (this.discussion) return;
    this.artPhase?.dispose();
    this.discussion = new DiscussionView(
      this.api,
      this.sessionId,
      this.voice,
      this.generatedArtwork.generated_image_ref ?? undefined,
    );
    this.root.appendChild(this.discussion.root);
    await this.discussion.open();
  }
}

export function mount(target: HTMLElement, config: AppConfig): HomeworkApp {
  const app = new HomeworkApp(config);
  target.appendChild(app.root);
  void app.start();
  return app;
}
