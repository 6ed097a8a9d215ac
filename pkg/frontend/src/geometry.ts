/** Polar-grid box geometry mirrored from the report conventions. */

export interface BoxCenter {
  re: number;
  im: number;
  R: number;
  psiDeg: number;
}

/**
 * Center of 1-based box i on a (P, Q) polar grid.
 *
 * Boxes are enumerated angle first: i = l + Q (k - 1) with annulus k and
 * cone l, so the center sits at radius (k - 1/2)/P and angle
 * 2 pi (l - 1/2)/Q.
 */
export function boxCenter(P: number, Q: number, i: number): BoxCenter {
  if (!Number.isInteger(i) || i < 1 || i > P * Q) {
    throw new RangeError(`box index ${i} outside 1..${P * Q}`);
  }
  const k = Math.ceil(i / Q);
  const l = i - Q * (k - 1);
  const R = (k - 0.5) / P;
  const psi = (2 * Math.PI * (l - 0.5)) / Q;
  return {
    re: R * Math.cos(psi),
    im: R * Math.sin(psi),
    R,
    psiDeg: (psi * 180) / Math.PI,
  };
}

/** Map unit-disk coordinates to pixels, y up. */
export function toScreen(
  re: number,
  im: number,
  cx: number,
  cy: number,
  scale: number,
): { x: number; y: number } {
  return { x: cx + re * scale, y: cy - im * scale };
}
