/**
 * Bounded clip playback.
 *
 * Loading a clip seeks to its start and plays; when playback reaches the
 * clip end the player pauses (it does not hard-stop), leaving the user
 * free to scrub anywhere, including outside the clip bounds. Once the
 * user scrubs, auto-pause disarms so exploration is never interrupted;
 * the player itself never initiates playback outside the bounds.
 */

export interface MediaLike {
  currentTime: number;
  paused: boolean;
  play(): void | Promise<void>;
  pause(): void;
}

export interface ClipBounds {
  start_s: number;
  end_s: number;
}

export class ClipPlayer {
  private bounds: ClipBounds | null = null;
  private armed = false;
  private scrubbed = false;
  pausedAtS: number | null = null;

  constructor(
    private media: MediaLike,
    readonly toleranceS: number = 0.5,
  ) {}

  get currentBounds(): ClipBounds | null {
    return this.bounds;
  }

  /** Seek to the clip start and begin playing; arm the end-of-clip pause. */
  load(bounds: ClipBounds): void {
    this.bounds = { ...bounds };
    this.armed = true;
    this.scrubbed = false;
    this.pausedAtS = null;
    this.media.currentTime = bounds.start_s;
    void this.media.play();
  }

  /** Wire to the media element's `timeupdate` event. */
  handleTimeUpdate(): void {
    if (!this.bounds || !this.armed || this.scrubbed) return;
    const t = this.media.currentTime;
    if (t >= this.bounds.end_s) {
      this.media.pause();
      this.armed = false;
      this.pausedAtS = t;
    }
  }

  /** User-initiated seek: allowed anywhere; disarms the auto-pause. */
  scrub(toS: number): void {
    this.scrubbed = true;
    this.media.currentTime = toS;
  }

  /** Resume after the end-of-clip pause (stays disarmed: user is exploring). */
  resume(): void {
    this.scrubbed = true;
    void this.media.play();
  }

  withinBounds(t: number): boolean {
    if (!this.bounds) return false;
    return this.bounds.start_s <= t && t <= this.bounds.end_s;
  }

  /** Timeline marker positions as fractions of the full video duration. */
  markers(durationS: number): { start: number; end: number } | null {
    if (!this.bounds || durationS <= 0) return null;
    return {
      start: Math.min(1, this.bounds.start_s / durationS),
      end: Math.min(1, this.bounds.end_s / durationS),
    };
  }
}
