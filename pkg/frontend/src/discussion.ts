/**
 * Discussion phase view: the finished artwork beside a guided conversation.
 * Voice replies autoplay by default with a persistent mute toggle; while a
 * turn is in flight the composer is locked (one in-flight turn per session,
 * mirroring the server's serialization).
 */

import { ApiClient } from "./api.js";
import { VoicePlayer } from "./audio.js";
import { addBubble } from "./chat.js";
import type { DiscussionTurn } from "./types.js";

export class DiscussionView {
  readonly root: HTMLElement;
  readonly chatLog: HTMLElement;
  readonly input: HTMLInputElement;
  readonly sendButton: HTMLButtonElement;
  readonly muteToggle: HTMLButtonElement;
  readonly artwork: HTMLImageElement;

  concluded = false;
  private inFlight = false;

  constructor(
    private api: ApiClient,
    private sessionId: string,
    private voice: VoicePlayer,
    artworkRef?: string,
  ) {
    this.root = document.createElement("section");
    this.root.className = "discussion-phase";

    this.artwork = document.createElement("img");
    this.artwork.className = "artwork";
    this.artwork.alt = "your artwork";
    if (artworkRef) this.artwork.src = this.api.fileUrl(artworkRef);

    this.chatLog = document.createElement("div");
    this.chatLog.className = "chat-log";

    this.input = document.createElement("input");
    this.input.type = "text";
    this.input.placeholder = "Say something about your artwork…";

    this.sendButton = document.createElement("button");
    this.sendButton.textContent = "Send";
    this.sendButton.addEventListener("click", () => void this.send());

    this.muteToggle = document.createElement("button");
    this.muteToggle.className = "mute-toggle";
    this.renderMuteLabel();
    this.muteToggle.addEventListener("click", () => {
      this.voice.toggle();
      this.renderMuteLabel();
    });

    this.root.append(this.artwork, this.chatLog, this.input, this.sendButton, this.muteToggle);
  }

  private renderMuteLabel(): void {
    this.muteToggle.textContent = this.voice.isMuted() ? "Unmute voice" : "Mute voice";
    this.muteToggle.dataset.muted = this.voice.isMuted() ? "1" : "0";
  }

  /** First call opens the phase: the agent speaks first. */
  async open(): Promise<DiscussionTurn> {
    return this.turn(undefined);
  }

  async send(): Promise<DiscussionTurn | null> {
    const text = this.input.value.trim();
    if (!text || this.inFlight) return null;
    this.input.value = "";
    addBubble(this.chatLog, "client", text);
    return this.turn(text);
  }

  private async turn(text: string | undefined): Promise<DiscussionTurn> {
    this.inFlight = true;
    this.sendButton.disabled = true;
    try {
      const turn = await this.api.discussionTurn(this.sessionId, text, !this.voice.isMuted());
      const bubble = addBubble(this.chatLog, "agent", turn.utterance.text);
      bubble.dataset.turnKind = turn.kind;
      if (turn.degraded) bubble.dataset.degraded = "1";
      if (turn.kind === "concluding") this.concluded = true;
      if (turn.audio_ref) this.voice.play(this.api.fileUrl(turn.audio_ref));
      return turn;
    } finally {
      this.inFlight = false;
      this.sendButton.disabled = false;
    }
  }
}
