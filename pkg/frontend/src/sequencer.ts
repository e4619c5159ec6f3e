/** Orders preview renders so the displayed image always matches the
 * most recently acknowledged request.
 *
 * Every issued request gets a sequence number; a response is applied
 * only if no newer response has been applied already, so late arrivals
 * from superseded requests are discarded. Issuing a new request aborts
 * the previous in-flight one (at most one preview request is active).
 */

export interface RenderOutcome {
  seq: number;
  bytes: ArrayBuffer;
}

type Issue = (signal: AbortSignal) => Promise<ArrayBuffer>;

export class PreviewSequencer {
  private nextSeq = 1;
  private appliedSeq = 0;
  private controller: AbortController | null = null;

  constructor(
    private onImage: (outcome: RenderOutcome) => void,
    private onError: (seq: number, err: unknown) => void = () => {},
  ) {}

  /** Highest sequence number applied to the display so far. */
  get applied(): number {
    return this.appliedSeq;
  }

  issue(run: Issue): number {
    const seq = this.nextSeq++;
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    run(controller.signal).then(
      (bytes) => {
        if (seq > this.appliedSeq) {
          this.appliedSeq = seq;
          this.onImage({ seq, bytes });
        }
      },
      (err) => {
        if (!controller.signal.aborted) this.onError(seq, err);
      },
    );
    return seq;
  }
}
