/** Least-squares slope of log(y) against log(x); the decay exponent p in y ~ x^p. */

export interface SlopeFit {
  slope: number;
  intercept: number;
  r2: number;
  n: number;
}

export function logLogSlope(xs: number[], ys: number[]): SlopeFit {
  const pts = xs
    .map((x, i) => [x, ys[i]] as [number, number])
    .filter(([x, y]) => x > 0 && y > 0);
  const n = pts.length;
  if (n < 2) {
    return { slope: 0, intercept: 0, r2: 0, n };
  }
  const lx = pts.map(([x]) => Math.log(x));
  const ly = pts.map(([, y]) => Math.log(y));
  const mx = lx.reduce((a, b) => a + b, 0) / n;
  const my = ly.reduce((a, b) => a + b, 0) / n;
  let sxx = 0;
  let sxy = 0;
  let syy = 0;
  for (let i = 0; i < n; i++) {
    sxx += (lx[i] - mx) ** 2;
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) ** 2;
  }
  const slope = sxx > 0 ? sxy / sxx : 0;
  const r2 = sxx > 0 && syy > 0 ? (sxy * sxy) / (sxx * syy) : 1;
  return { slope, intercept: my - slope * mx, r2, n };
}
