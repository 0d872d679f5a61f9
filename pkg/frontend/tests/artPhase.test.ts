import { describe, expect, it } from "vitest";

import { ArtPhaseView } from "../src/artPhase.js";
import { agentBubbles } from "../src/chat.js";
import { FakeApi, fixtures } from "./helpers.js";

const SIZE = { width: 64, height: 64 };
const SQUARE = [
  [2, 2],
  [30, 2],
  [30, 30],
  [2, 30],
];

function view(api: FakeApi, callbacks = {}) {
  return new ArtPhaseView(api.asClient(), "ses-test", SIZE, callbacks, 5);
}

describe("art phase", () => {
  it("surfaces the agent question after a draw event", async () => {
    const api = new FakeApi();
    const artPhase = view(api);
    await artPhase.submitStroke("Ocean", SQUARE);

    const bubbles = agentBubbles(artPhase.chatLog);
    expect(bubbles).toHaveLength(1);
    // traceable to the recorded API response, not invented by the UI
    expect(bubbles[0].textContent).toBe(fixtures.strokeResponse.agent_utterance?.text);
    expect(bubbles[0].textContent).toBe("What kind of ocean is this?");
    expect(api.calls[0]).toEqual({
      method: "postStroke",
      args: ["ses-test", "Ocean", SQUARE],
    });
  });

  it("renders the session intro (opening message first, then the task)", () => {
    const api = new FakeApi();
    const artPhase = view(api);
    artPhase.showSessionIntro(fixtures.sessionCreate);

    const bubbles = artPhase.chatLog.querySelectorAll<HTMLElement>(".bubble");
    expect(bubbles[0].dataset.kind).toBe("opening_message");
    expect(bubbles[0].textContent).toBe(fixtures.sessionCreate.opening_message);
    expect(bubbles[1].dataset.kind).toBe("task_display");
    expect(bubbles[1].textContent).toBe(fixtures.sessionCreate.homework_task);
  });

  it("shows a spinner until the job completes, then the preview image", async () => {
    const api = new FakeApi();
    let generated = false;
    const artPhase = view(api, { onArtworkGenerated: () => (generated = true) });

    await artPhase.generate();
    expect(artPhase.preview.querySelector(".spinner")).not.toBeNull();

    await new Promise((resolve) => setTimeout(resolve, 50)); // two poll ticks
    const image = artPhase.preview.querySelector("img");
    expect(image).not.toBeNull();
    expect(image!.src).toContain(fixtures.jobCompleted.generated_image_ref as string);
    expect(generated).toBe(true);
  });

  it("keeps drawing usable when the job fails, with a retry notice", async () => {
    const api = new FakeApi();
    api.jobSequence = [{ ...fixtures.jobQueued, status: "failed", failure_reason: "provider down" }];
    const artPhase = view(api);

    await artPhase.generate();
    await new Promise((resolve) => setTimeout(resolve, 20));
    expect(artPhase.notice.textContent).toContain("provider down");
    expect(artPhase.notice.textContent).toContain("retry");
    expect(artPhase.generateButton.disabled).toBe(false);
  });
});
