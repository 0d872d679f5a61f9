/**
 * Voice replies autoplay by default; the mute preference sticks per user
 * (localStorage). Playback failures are swallowed: audio is a convenience,
 * never a blocker.
 */

const MUTE_KEY = "arthomework.muted";

export class VoicePlayer {
  constructor(
    private storage: Storage = localStorage,
    private audioFactory: (url: string) => { play(): Promise<void> } = (url) => new Audio(url),
  ) {}

  isMuted(): boolean {
    return this.storage.getItem(MUTE_KEY) === "1";
  }

  setMuted(muted: boolean): void {
    this.storage.setItem(MUTE_KEY, muted ? "1" : "0");
  }

  toggle(): boolean {
    const next = !this.isMuted();
    this.setMuted(next);
    return next;
  }

  play(url: string): void {
    if (this.isMuted()) return;
    this.audioFactory(url)
      .play()
      .catch(() => {});
  }
}
