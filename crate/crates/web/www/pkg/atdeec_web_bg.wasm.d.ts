/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_demo_free: (a: number, b: number) => void;
export const clusterOptimum: (a: number, b: number) => [number, number, number, number];
export const compareProtocols: (a: number, b: bigint, c: number) => [number, number, number, number];
export const demo_alive: (a: number) => number;
export const demo_fieldSide: (a: number) => number;
export const demo_new: (a: number, b: number, c: number, d: bigint, e: number) => [number, number, number];
export const demo_packets: (a: number) => bigint;
export const demo_positions: (a: number) => [number, number];
export const demo_residualEnergy: (a: number) => number;
export const demo_round: (a: number) => number;
export const demo_states: (a: number) => [number, number];
export const demo_step: (a: number, b: number) => [number, number, number];
export const energyCurve: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
