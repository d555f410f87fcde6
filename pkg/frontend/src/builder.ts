/** Interactive action builder: family -> location -> variant.
 *
 * Every stage is a pure projection of the server's legal-action list, so
 * only prefixes leading to at least one legal index are ever offered and
 * the emitted index is always drawn from that list. The server still
 * re-validates every submission. */

import { LegalEntry } from "./types";

// Dense-index layout (mirrors the engine's action codec; display-side
// grouping only — legality always comes from the server's list).
export const HEX_PLANES = 18;
export const CULT_BLOCK_START = 2106;
export const SHIPPING_INDEX = 2118;
export const SPADE_INDEX = 2119;
export const POWER_BLOCK_START = 2120;
export const SPECIAL_BLOCK_START = 2126;
export const PASS_BLOCK_START = 2129;
export const TOWN_BLOCK_START = 2138;
export const NUM_ACTIONS = 2143;

export type Family =
  | "terraform"
  | "build"
  | "upgrade"
  | "priest"
  | "advance"
  | "power"
  | "special"
  | "pass"
  | "town";

export const FAMILY_LABELS: Record<Family, string> = {
  terraform: "Terraform a hex",
  build: "Terraform & build a dwelling",
  upgrade: "Upgrade a building",
  priest: "Send a priest to a cult",
  advance: "Advance shipping / digging",
  power: "Board power action",
  special: "Special action",
  pass: "Pass (pick next bonus card)",
  town: "Choose a town tile",
};

export interface ClassifiedAction extends LegalEntry {
  family: Family;
  /** Hex (r, c) for hex-block actions, cult index for priests, slot or
   * card or tile id otherwise; null when the family has one location. */
  location: [number, number] | number | null;
  /** Variant discriminator within (family, location). */
  variant: number;
}

export function classify(entry: LegalEntry): ClassifiedAction {
  const idx = entry.index;
  if (idx < 0 || idx >= NUM_ACTIONS) {
    throw new Error(`action index ${idx} out of range`);
  }
  if (idx < CULT_BLOCK_START) {
    const hexId = Math.floor(idx / HEX_PLANES);
    const plane = idx % HEX_PLANES;
    const location: [number, number] = [Math.floor(hexId / 13), hexId % 13];
    if (plane < 7) {
      return { ...entry, family: "terraform", location, variant: plane };
    }
    if (plane < 14) {
      return { ...entry, family: "build", location, variant: plane - 7 };
    }
    return { ...entry, family: "upgrade", location, variant: plane - 14 };
  }
  if (idx < SHIPPING_INDEX) {
    const rel = idx - CULT_BLOCK_START;
    return {
      ...entry,
      family: "priest",
      location: Math.floor(rel / 3),
      variant: rel % 3,
    };
  }
  if (idx <= SPADE_INDEX) {
    return { ...entry, family: "advance", location: null, variant: idx - SHIPPING_INDEX };
  }
  if (idx < SPECIAL_BLOCK_START) {
    return { ...entry, family: "power", location: null, variant: idx - POWER_BLOCK_START };
  }
  if (idx < PASS_BLOCK_START) {
    return { ...entry, family: "special", location: null, variant: idx - SPECIAL_BLOCK_START };
  }
  if (idx < TOWN_BLOCK_START) {
    return { ...entry, family: "pass", location: null, variant: idx - PASS_BLOCK_START };
  }
  return { ...entry, family: "town", location: null, variant: idx - TOWN_BLOCK_START };
}

export interface FamilyChoice {
  family: Family;
  label: string;
  count: number;
}

/** Families present in the legal list, in codec order. */
export function familyChoices(legal: LegalEntry[]): FamilyChoice[] {
  const order: Family[] = [
    "terraform",
    "build",
    "upgrade",
    "priest",
    "advance",
    "power",
    "special",
    "pass",
    "town",
  ];
  const counts = new Map<Family, number>();
  for (const entry of legal) {
    const f = classify(entry).family;
    counts.set(f, (counts.get(f) ?? 0) + 1);
  }
  return order
    .filter((f) => counts.has(f))
    .map((f) => ({ family: f, label: FAMILY_LABELS[f], count: counts.get(f)! }));
}

export interface LocationChoice {
  key: string;
  hex: [number, number] | null;
  cult: number | null;
  count: number;
}

function locationKey(a: ClassifiedAction): string {
  if (Array.isArray(a.location)) return `${a.location[0]},${a.location[1]}`;
  if (a.location === null) return "-";
  return String(a.location);
}

/** Second stage: hexes (or cults) with at least one legal action of the
 * chosen family. Families without a location dimension return a single
 * placeholder entry. */
export function locationChoices(legal: LegalEntry[], family: Family): LocationChoice[] {
  const byKey = new Map<string, LocationChoice>();
  for (const entry of legal) {
    const a = classify(entry);
    if (a.family !== family) continue;
    const key = locationKey(a);
    const existing = byKey.get(key);
    if (existing) {
      existing.count += 1;
    } else {
      byKey.set(key, {
        key,
        hex: Array.isArray(a.location) ? a.location : null,
        cult: typeof a.location === "number" ? a.location : null,
        count: 1,
      });
    }
  }
  return [...byKey.values()];
}

/** Final stage: the concrete legal indices under (family, location),
 * each carrying the server's human-readable description. */
export function variantChoices(
  legal: LegalEntry[],
  family: Family,
  location: string,
): ClassifiedAction[] {
  return legal
    .map(classify)
    .filter((a) => a.family === family && locationKey(a) === location)
    .sort((a, b) => a.index - b.index);
}

/** Hexes to highlight for a family selection (exactly those present in
 * the legal list). */
export function highlightedHexes(legal: LegalEntry[], family: Family): [number, number][] {
  return locationChoices(legal, family)
    .filter((l) => l.hex !== null)
    .map((l) => l.hex!) as [number, number][];
}
