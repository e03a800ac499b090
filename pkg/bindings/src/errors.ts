/**
 * Error taxonomy of the binding layer.
 *
 * CoreError wraps a failed run of the underlying command-line tool and
 * carries its stderr text untouched, so everything the core can diagnose is
 * reported in its own words. ProtocolError and HandleError are raised on
 * this side of the boundary, before any process is spawned.
 */

export class BindingError extends Error {
  constructor(message: string) {
    super(message);
    this.name = new.target.name;
  }
}

/** A malformed tagged value, or a payload the document formats cannot carry. */
export class ProtocolError extends BindingError {}

/** An unknown or already-released handle. */
export class HandleError extends BindingError {}

/** The core tool failed; `message` is its own diagnostic text. */
export class CoreError extends BindingError {
  /** 1 usage error, 2 data or model error, -1 spawn failure. */
  readonly exitCode: number;

  constructor(message: string, exitCode: number) {
    super(message);
    this.exitCode = exitCode;
  }
}
