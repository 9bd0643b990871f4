// Wire types for the logichart session protocol. Every message the server
// can send is validated here; anything that fails the schema surfaces as a
// banner instead of corrupting the view.

import { z } from "zod";

// An address segment is a single-key object: {"body": i} or {"alt": clauseId}
const BodySegment = z.strictObject({ body: z.number().int() });
const AltSegment = z.strictObject({ alt: z.number().int() });
export const AddressSchema = z.array(z.union([BodySegment, AltSegment]));
export type AddressJson = z.infer<typeof AddressSchema>;

export const NodeKindSchema = z.enum([
  "Root",
  "UserGoal",
  "ClauseHead",
  "BuiltinGoal",
  "RecursiveGoal",
]);
export type NodeKind = z.infer<typeof NodeKindSchema>;

export const VisualStateSchema = z.enum([
  "Untouched",
  "Called",
  "Succeeded",
  "Failed",
  "Pruned",
]);
export type VisualState = z.infer<typeof VisualStateSchema>;

export const DiagramNodeSchema = z.object({
  address: AddressSchema,
  kind: NodeKindSchema,
  label: z.string(),
  x: z.number(),
  y: z.number(),
  w: z.number(),
  h: z.number(),
  retracted: z.boolean(),
});
export type DiagramNodeJson = z.infer<typeof DiagramNodeSchema>;

export const LayoutConstantsSchema = z.object({
  gap_x: z.number(),
  gap_y: z.number(),
  root_x: z.number(),
  root_y: z.number(),
  char_width: z.number(),
  padding: z.number(),
  box_height: z.number(),
});

export const PatchSchema = z.object({
  added: z.array(DiagramNodeSchema),
  crossed: z.array(AddressSchema),
  moved: z.array(z.object({ address: AddressSchema, x: z.number(), y: z.number() })),
});
export type PatchJson = z.infer<typeof PatchSchema>;

const DiagramFullSchema = z.object({
  kind: z.literal("DiagramFull"),
  root: AddressSchema,
  constants: LayoutConstantsSchema,
  nodes: z.array(DiagramNodeSchema),
});
const NodeStateSchema = z.object({
  kind: z.literal("NodeState"),
  address: AddressSchema,
  state: VisualStateSchema,
});
const DiagramPatchSchema = z.object({
  kind: z.literal("DiagramPatch"),
  patch: PatchSchema,
});
const BindingsSchema = z.object({
  kind: z.literal("Bindings"),
  address: AddressSchema,
  vars: z.array(z.tuple([z.string(), z.string()])),
  text: z.string().nullish(),
});
const OutputTextSchema = z.object({
  kind: z.literal("OutputText"),
  text: z.string(),
});
const PromptBacktrackSchema = z.object({ kind: z.literal("PromptBacktrack") });
const DoneSchema = z.object({
  kind: z.literal("Done"),
  success: z.boolean(),
  solutions: z.number().int(),
  text: z.string().optional(),
});
const ErrorSchema = z.object({
  kind: z.literal("Error"),
  message: z.string(),
});

export const ServerMessageSchema = z.discriminatedUnion("kind", [
  DiagramFullSchema,
  NodeStateSchema,
  DiagramPatchSchema,
  BindingsSchema,
  OutputTextSchema,
  PromptBacktrackSchema,
  DoneSchema,
  ErrorSchema,
]);
export type ServerMessage = z.infer<typeof ServerMessageSchema>;
export type DiagramFullMsg = z.infer<typeof DiagramFullSchema>;
export type BindingsMsg = z.infer<typeof BindingsSchema>;
export type DoneMsg = z.infer<typeof DoneSchema>;

export class ProtocolError extends Error {}

export function parseServerMessage(raw: string): ServerMessage {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch (e) {
    throw new ProtocolError(`not JSON: ${(e as Error).message}`);
  }
  const result = ServerMessageSchema.safeParse(data);
  if (!result.success) {
    const kind =
      typeof data === "object" && data !== null && "kind" in data
        ? String((data as { kind: unknown }).kind)
        : "?";
    throw new ProtocolError(`malformed ${kind} message: ${result.error.message}`);
  }
  return result.data;
}

// Canonical string form of an address, usable as a map key: "b0.a5.b1"
export function addressKey(addr: AddressJson): string {
  return addr
    .map((seg) => ("body" in seg ? `b${seg.body}` : `a${seg.alt}`))
    .join(".");
}

// --- requests

export function loadProgram(text: string): object {
  return { kind: "LoadProgram", text };
}
export function setQuery(text: string): object {
  return { kind: "SetQuery", text };
}
export function step(): object {
  return { kind: "Step" };
}
export function run(): object {
  return { kind: "Run" };
}
export function answerBacktrack(more: boolean): object {
  return { kind: "AnswerBacktrack", success: more };
}
export function getDiagram(): object {
  return { kind: "GetDiagram" };
}
export function reset(): object {
  return { kind: "Reset" };
}
