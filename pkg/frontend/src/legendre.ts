/**
 * Evaluation of an emitted Legendre expansion. The coefficients always come
 * from a fit record produced upstream; nothing here fits anything.
 */

/** Sum a_k P_k(x) by the Bonnet recurrence. */
export function legendreSum(coefficients: number[], x: number): number {
  if (coefficients.length === 0) return 0;
  let pPrev = 1.0;
  let total = (coefficients[0] ?? 0) * pPrev;
  if (coefficients.length === 1) return total;
  let pCurr = x;
  total += (coefficients[1] ?? 0) * pCurr;
  for (let k = 2; k < coefficients.length; k++) {
    const pNext = ((2 * k - 1) * x * pCurr - (k - 1) * pPrev) / k;
    total += (coefficients[k] ?? 0) * pNext;
    pPrev = pCurr;
    pCurr = pNext;
  }
  return total;
}
