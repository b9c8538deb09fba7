/**
 * Drives the core CLI as a subprocess and maps its exit-code contract onto
 * exceptions. stdout is the JSON report envelope; stderr carries the core's
 * diagnostic text, which is re-thrown verbatim.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export interface RunnerOptions {
    /** Interpreter used to launch the core (default: $EMBQ_PYTHON or "python3"). */
    python?: string;
}

export class EmbqError extends Error {
    constructor(message: string, readonly exitCode: number) {
        super(message);
        this.name = "EmbqError";
    }
}

export interface Envelope {
    schema_version: string;
    input: unknown;
    options: unknown;
    payload_type: string;
    payload: unknown;
}

export function runCli(args: string[], opts: RunnerOptions = {}): string {
    const python = opts.python ?? process.env.EMBQ_PYTHON ?? "python3";
    const result = spawnSync(python, ["-m", "embq.cli", ...args], {
        encoding: "utf-8",
        maxBuffer: 256 * 1024 * 1024,
    });
    if (result.error) {
        throw new EmbqError(`failed to launch ${python}: ${result.error.message}`, -1);
    }
    if (result.status !== 0) {
        const detail = (result.stderr ?? "").trim() || `exit code ${result.status}`;
        throw new EmbqError(detail, result.status ?? -1);
    }
    return result.stdout;
}

export function runForEnvelope(args: string[], opts: RunnerOptions = {}): Envelope {
    return JSON.parse(runCli(args, opts)) as Envelope;
}

/** Run `fn` with a scratch directory that is removed afterwards. */
export function withTempDir<T>(fn: (dir: string) => T): T {
    const dir = mkdtempSync(join(tmpdir(), "embq-"));
    try {
        return fn(dir);
    } finally {
        rmSync(dir, { recursive: true, force: true });
    }
}

export function writeTempFile(dir: string, name: string, content: Buffer | string): string {
    const path = join(dir, name);
    writeFileSync(path, content);
    return path;
}
