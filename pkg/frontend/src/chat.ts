/** Chat log rendering shared by both phases. */

import type { Utterance } from "./types.js";

export function addBubble(
  log: HTMLElement,
  speaker: "client" | "agent" | "system",
  text: string,
  kind = "speech",
): HTMLElement {
  const bubble = document.createElement("div");
  bubble.className = `bubble bubble-${speaker}`;
  bubble.dataset.speaker = speaker;
  bubble.dataset.kind = kind;
  bubble.textContent = text;
  log.appendChild(bubble);
  log.scrollTop = log.scrollHeight;
  return bubble;
}

export function addUtterance(log: HTMLElement, utterance: Utterance): HTMLElement {
  return addBubble(log, utterance.speaker, utterance.text, utterance.kind);
}

export function agentBubbles(log: HTMLElement): HTMLElement[] {
  return Array.from(log.querySelectorAll<HTMLElement>('[data-speaker="agent"]'));
}
