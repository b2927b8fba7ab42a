// String-building primitives shared by the panel renderers. Panels are
// pure payload -> markup functions so the test suite can snapshot them
// without a DOM.

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export type Attrs = Record<string, string | number | undefined>;

export function tag(name: string, attrs: Attrs, children: string = ""): string {
  const parts = Object.entries(attrs)
    .filter(([, v]) => v !== undefined)
    .map(([k, v]) => `${k}="${esc(String(v))}"`);
  const head = parts.length ? `<${name} ${parts.join(" ")}` : `<${name}`;
  return children === "" ? `${head}/>` : `${head}>${children}</${name}>`;
}

/** Fixed-precision number for stable markup; trims trailing zeros. */
export function num(value: number): string {
  const rounded = Math.round(value * 10) / 10;
  return Number.isInteger(rounded) ? String(rounded) : rounded.toFixed(1);
}

// Sequential single-hue scales, darker = more. Hue is fixed per role;
// only lightness moves so adjacent shades stay comparable.
function shade(hue: number, sat: number, count: number, max: number): string {
  const t = max > 0 ? Math.min(1, count / max) : 0;
  const light = Math.round(93 - 58 * t);
  return `hsl(${hue} ${sat}% ${light}%)`;
}

export const blueShade = (count: number, max: number): string => shade(213, 45, count, max);
export const orangeShade = (count: number, max: number): string => shade(28, 85, count, max);
export const greenShade = (count: number, max: number): string => shade(140, 45, count, max);

export function fmtMs(ms: number): string {
  if (ms >= 60_000) return `${num(ms / 60_000)}min`;
  if (ms >= 1_000) return `${num(ms / 1_000)}s`;
  return `${num(ms)}ms`;
}

export function fmtPx(px: number): string {
  return `${num(px)}px`;
}
