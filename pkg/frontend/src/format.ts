// Number formatting for display. The underlying JSON keeps full precision;
// these helpers only trim for the eye.

export function fmt(x: number, places = 4): string {
  let s = x.toFixed(places);
  if (s.includes(".")) {
    s = s.replace(/0+$/, "");
    if (s.endsWith(".")) s += "0";
  }
  return s;
}

export function pct(x: number): string {
  return `${Math.round(x * 1000) / 10}%`;
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
