/* tslint:disable */
/* eslint-disable */

/**
 * A running simulation the page advances a few rounds per frame.
 */
export class Demo {
    free(): void;
    [Symbol.dispose](): void;
    alive(): number;
    fieldSide(): number;
    constructor(protocol: string, radius: number, seed: bigint, max_rounds: number);
    packets(): bigint;
    /**
     * Interleaved `[x0, y0, x1, y1, ...]`, metres.
     */
    positions(): Float64Array;
    residualEnergy(): number;
    round(): number;
    /**
     * One of `DEAD`, `MEMBER`, `HEAD`, `EXCLUDED` per node, for the last played round.
     */
    states(): Uint8Array;
    /**
     * Plays up to `rounds` rounds; false once the run is over.
     */
    step(rounds: number): boolean;
}

/**
 * `[c_opt_real, c_opt_int, p_opt]`.
 */
export function clusterOptimum(s: number, radius: number): Float64Array;

/**
 * Runs both protocols to completion: `[fnd, lnd, packets]` for TDEEC then ATDEEC.
 */
export function compareProtocols(radius: number, seed: bigint, max_rounds: number): Float64Array;

/**
 * `E_total(c)` in joules for `c = c_min..=c_max` on the default 100-node field.
 */
export function energyCurve(s: number, radius: number, c_min: number, c_max: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demo_free: (a: number, b: number) => void;
    readonly clusterOptimum: (a: number, b: number) => [number, number, number, number];
    readonly compareProtocols: (a: number, b: bigint, c: number) => [number, number, number, number];
    readonly demo_alive: (a: number) => number;
    readonly demo_fieldSide: (a: number) => number;
    readonly demo_new: (a: number, b: number, c: number, d: bigint, e: number) => [number, number, number];
    readonly demo_packets: (a: number) => bigint;
    readonly demo_positions: (a: number) => [number, number];
    readonly demo_residualEnergy: (a: number) => number;
    readonly demo_round: (a: number) => number;
    readonly demo_states: (a: number) => [number, number];
    readonly demo_step: (a: number, b: number) => [number, number, number];
    readonly energyCurve: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
