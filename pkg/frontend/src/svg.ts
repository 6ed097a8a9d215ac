/**
 * Minimal deterministic SVG assembly.
 *
 * All coordinates pass through a fixed-precision formatter and elements
 * are emitted in call order, so identical inputs yield identical bytes.
 */

export function fmt(value: number): string {
  const rounded = value.toFixed(2);
  return rounded === "-0.00" ? "0.00" : rounded;
}

function attrs(pairs: Record<string, string | number>): string {
  return Object.entries(pairs)
    .map(([key, value]) =>
      ` ${key}="${typeof value === "number" ? fmt(value) : value}"`,
    )
    .join("");
}

export class Svg {
  private parts: string[] = [];

  constructor(
    readonly width: number,
    readonly height: number,
  ) {}

  circle(
    x: number,
    y: number,
    r: number,
    stroke: string,
    fill = "none",
    extra: Record<string, string | number> = {},
  ): void {
    this.parts.push(
      `<circle${attrs({ cx: x, cy: y, r, stroke, fill, ...extra })}/>`,
    );
  }

  line(
    x1: number,
    y1: number,
    x2: number,
    y2: number,
    stroke: string,
    width = 1,
  ): void {
    this.parts.push(
      `<line${attrs({ x1, y1, x2, y2, stroke, "stroke-width": width })}/>`,
    );
  }

  /** An x-shaped cross marker centered at (x, y). */
  cross(x: number, y: number, arm: number, stroke: string, width = 2): void {
    this.line(x - arm, y - arm, x + arm, y + arm, stroke, width);
    this.line(x - arm, y + arm, x + arm, y - arm, stroke, width);
  }

  /** A +-shaped marker centered at (x, y). */
  plus(x: number, y: number, arm: number, stroke: string, width = 2): void {
    this.line(x - arm, y, x + arm, y, stroke, width);
    this.line(x, y - arm, x, y + arm, stroke, width);
  }

  rect(
    x: number,
    y: number,
    w: number,
    h: number,
    stroke: string,
    fill = "none",
  ): void {
    this.parts.push(
      `<rect${attrs({ x, y, width: w, height: h, stroke, fill })}/>`,
    );
  }

  polyline(points: Array<[number, number]>, stroke: string, width = 1): void {
    const path = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(
      `<polyline points="${path}" fill="none" stroke="${stroke}"` +
        ` stroke-width="${fmt(width)}"/>`,
    );
  }

  text(x: number, y: number, content: string, size = 12, fill = "black"): void {
    const escaped = content
      .replace(/&/g, "&amp;")
      .replace(/</g, "&lt;")
      .replace(/>/g, "&gt;");
    this.parts.push(
      `<text${attrs({ x, y, "font-size": size, fill })}` +
        ` font-family="sans-serif">${escaped}</text>`,
    );
  }

  toString(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}"` +
      ` height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">` +
      `<rect width="${this.width}" height="${this.height}" fill="white"/>` +
      this.parts.join("") +
      `</svg>`
    );
  }
}
