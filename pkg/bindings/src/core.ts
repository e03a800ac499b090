/**
 * Process transport: every operation is one run of the core's CLI.
 *
 * Nothing crosses in memory. Inputs are written as documents, outputs are
 * read back as documents, so each result is bit-identical to what the same
 * command produces by hand on the same files.
 */

import { spawnSync } from "node:child_process";

import { CoreError, ProtocolError } from "./errors.js";

/** Interpreter running the core; override with MIXMETRIC_PYTHON. */
function corePython(): string {
  return process.env["MIXMETRIC_PYTHON"] ?? "python3";
}

export function runCore(args: readonly string[], cwd: string): Buffer {
  const proc = spawnSync(corePython(), ["-m", "mixmetric.cli", ...args], {
    cwd,
    env: process.env,
    maxBuffer: 1 << 30,
  });
  if (proc.error) {
    throw new CoreError(`failed to spawn the core: ${proc.error.message}`, -1);
  }
  if (proc.status !== 0) {
    const stderr = proc.stderr.toString("utf8").trimEnd();
    throw new CoreError(stderr || `core exited with status ${proc.status}`, proc.status ?? -1);
  }
  return proc.stdout;
}

const MATRIX_MAGIC = Buffer.from("MIXMAT01", "ascii");

const LITTLE_ENDIAN = new Uint8Array(new Uint16Array([1]).buffer)[0] === 1;

/**
 * Parse the binary condensed-matrix form (docs/format.md) into an aligned
 * Float64Array owning a copy of the payload bits.
 */
export function parseMatrixBinary(blob: Buffer): { n: number; values: Float64Array } {
  if (blob.length < MATRIX_MAGIC.length + 8 || !blob.subarray(0, 8).equals(MATRIX_MAGIC)) {
    throw new ProtocolError("core produced no condensed matrix binary (bad magic)");
  }
  const nBig = blob.readBigUInt64LE(8);
  if (nBig > BigInt(Number.MAX_SAFE_INTEGER)) {
    throw new ProtocolError(`matrix record count ${nBig} does not fit a JS number`);
  }
  const n = Number(nBig);
  const body = blob.subarray(16);
  const count = (n * (n - 1)) / 2;
  if (body.length !== count * 8) {
    throw new ProtocolError(
      `matrix binary for n=${n} should carry ${count * 8} payload bytes, got ${body.length}`,
    );
  }
  const values = new Float64Array(count);
  const bytes = new Uint8Array(values.buffer);
  if (LITTLE_ENDIAN) {
    bytes.set(body);
  } else {
    for (let i = 0; i < body.length; i += 8) {
      for (let b = 0; b < 8; b += 1) {
        bytes[i + b] = body[i + 7 - b]!;
      }
    }
  }
  return { n, values };
}
