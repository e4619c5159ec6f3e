import { describe, expect, it } from 'vitest';

import { PreviewSequencer } from '../src/sequencer.js';

function deferred<T>() {
  let resolve!: (v: T) => void;
  let reject!: (e: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}

const bytes = (tag: number) => new Uint8Array([tag]).buffer;

describe('stale-response ordering', () => {
  it('discards a slow older response that lands after a newer one', async () => {
    const shown: number[] = [];
    const seq = new PreviewSequencer((o) => shown.push(new Uint8Array(o.bytes)[0]));

    const slow = deferred<ArrayBuffer>();
    const fast = deferred<ArrayBuffer>();
    seq.issue(() => slow.promise); // request 1: slow network
    seq.issue(() => fast.promise); // request 2: newer interaction

    fast.resolve(bytes(2));
    await Promise.resolve();
    slow.resolve(bytes(1)); // arrives late
    await Promise.resolve();

    expect(shown).toEqual([2]); // the stale frame never displays
    expect(seq.applied).toBe(2);
  });

  it('applies in-order responses normally', async () => {
    const shown: number[] = [];
    const seq = new PreviewSequencer((o) => shown.push(new Uint8Array(o.bytes)[0]));
    const a = deferred<ArrayBuffer>();
    seq.issue(() => a.promise);
    a.resolve(bytes(1));
    await Promise.resolve();
    const b = deferred<ArrayBuffer>();
    seq.issue(() => b.promise);
    b.resolve(bytes(2));
    await Promise.resolve();
    expect(shown).toEqual([1, 2]);
  });

  it('aborts the in-flight request when a newer one is issued', async () => {
    const seen: AbortSignal[] = [];
    const errors: number[] = [];
    const seq = new PreviewSequencer(
      () => {},
      (s) => errors.push(s),
    );
    const first = deferred<ArrayBuffer>();
    seq.issue((signal) => {
      seen.push(signal);
      return first.promise;
    });
    expect(seen[0].aborted).toBe(false);
    seq.issue(() => deferred<ArrayBuffer>().promise);
    expect(seen[0].aborted).toBe(true);

    first.reject(new DOMException('aborted', 'AbortError'));
    await Promise.resolve();
    expect(errors).toEqual([]); // self-inflicted aborts are not surfaced
  });

  it('keeps the previous image when a request fails', async () => {
    const shown: number[] = [];
    const errors: number[] = [];
    const seq = new PreviewSequencer(
      (o) => shown.push(new Uint8Array(o.bytes)[0]),
      (s) => errors.push(s),
    );
    const ok = deferred<ArrayBuffer>();
    seq.issue(() => ok.promise);
    ok.resolve(bytes(1));
    await Promise.resolve();

    const bad = deferred<ArrayBuffer>();
    seq.issue(() => bad.promise);
    bad.reject(new Error('422'));
    await Promise.resolve();

    expect(shown).toEqual([1]);
    expect(errors).toEqual([2]);
  });
});
