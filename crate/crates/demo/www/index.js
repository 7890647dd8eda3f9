import init, { constantsTable, smallDeviationCurve, samplePath } from "./pkg/smalldev_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const fmt = (x, d = 5) => (x === null || x === undefined ? "" : Number(x).toPrecision(d));

function table(headers, rows) {
  const head = headers.map((h) => `<th>${h}</th>`).join("");
  const body = rows.map((r) => `<tr>${r.map((c) => `<td>${c}</td>`).join("")}</tr>`).join("");
  return `<table><tr>${head}</tr>${body}</table>`;
}

function guarded(out, f) {
  try {
    f();
  } catch (e) {
    $(out).innerHTML = `<p class="error">${e}</p>`;
  }
}

function runConstants() {
  guarded("c-out", () => {
    const rows = JSON.parse(constantsTable(num("c-n")));
    $("c-out").innerHTML = table(
      ["n", "&tau;<sub>n</sub>", "", "d<sub>n</sub>", "k<sub>n</sub>"],
      rows.map((r) => [r.n, r.tau_exact ?? "", fmt(r.tau, 8), fmt(r.d, 8), fmt(r.constant, 8)]),
    );
  });
}

function logAxes(ctx, w, h, xs, ys) {
  const lx = xs.map(Math.log10), ly = ys.map(Math.log10);
  const x0 = Math.min(...lx), x1 = Math.max(...lx), y0 = Math.min(...ly), y1 = Math.max(...ly);
  const pad = 40;
  const px = (x) => pad + ((Math.log10(x) - x0) / (x1 - x0 || 1)) * (w - 2 * pad);
  const py = (y) => h - pad - ((Math.log10(y) - y0) / (y1 - y0 || 1)) * (h - 2 * pad);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.font = "12px sans-serif";
  ctx.fillText(`eps ${fmt(10 ** x0, 3)} .. ${fmt(10 ** x1, 3)}`, pad, h - 12);
  ctx.fillText(`-log p ${fmt(10 ** y0, 3)} .. ${fmt(10 ** y1, 3)}`, pad, 24);
  return [px, py];
}

function runCurve() {
  guarded("m-out", () => {
    const depth = num("m-depth");
    const r = JSON.parse(smallDeviationCurve(depth, num("m-min"), num("m-max"), 8, num("m-n"), BigInt(num("m-seed"))));
    const pts = r.eps.map((e, i) => [e, r.p_hat[i]]).filter(([, p]) => p > 0 && p < 1).map(([e, p]) => [e, -Math.log(p)]);
    const law = r.eps.map((e) => [e, r.law.constant * e ** -r.law.exponent]);
    const canvas = $("m-plot");
    const ctx = canvas.getContext("2d");
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    const all = pts.concat(law);
    const [px, py] = logAxes(ctx, canvas.width, canvas.height, all.map((p) => p[0]), all.map((p) => p[1]));
    ctx.strokeStyle = "#d62728";
    ctx.beginPath();
    law.forEach(([e, y], i) => (i ? ctx.lineTo(px(e), py(y)) : ctx.moveTo(px(e), py(y))));
    ctx.stroke();
    ctx.fillStyle = "#1f77b4";
    for (const [e, y] of pts) {
      ctx.beginPath();
      ctx.arc(px(e), py(y), 3.5, 0, 2 * Math.PI);
      ctx.fill();
    }
    const fit = r.fit
      ? `fitted exponent ${fmt(r.fit.exponent, 4)} &plusmn; ${fmt(r.fit.stderr, 2)}`
      : "too few points with 0 &lt; p&#770; &lt; 1 for a fit";
    $("m-out").innerHTML =
      `<p>${fit}; predicted ${fmt(r.law.exponent, 4)} with constant ${fmt(r.law.constant, 4)}.</p>` +
      table(["&epsilon;", "p&#770;", "99% CI"], r.eps.map((e, i) => [fmt(e, 4), fmt(r.p_hat[i], 4), `${fmt(r.ci_low[i], 3)} &ndash; ${fmt(r.ci_high[i], 3)}`]));
  });
}

function runPath() {
  guarded("p-out", () => {
    const r = JSON.parse(samplePath($("p-kind").value, num("p-param"), num("p-points"), BigInt(num("p-seed"))));
    const canvas = $("p-plot");
    const ctx = canvas.getContext("2d");
    const w = canvas.width, h = canvas.height, pad = 20;
    ctx.clearRect(0, 0, w, h);
    const span = r.max - r.min || 1;
    const py = (x) => h - pad - ((x - r.min) / span) * (h - 2 * pad);
    ctx.strokeStyle = "#ccc";
    ctx.beginPath();
    ctx.moveTo(pad, py(0));
    ctx.lineTo(w - pad, py(0));
    ctx.stroke();
    ctx.strokeStyle = "#1f77b4";
    ctx.beginPath();
    r.x.forEach((x, i) => {
      const X = pad + r.t[i] * (w - 2 * pad);
      i ? ctx.lineTo(X, py(x)) : ctx.moveTo(X, py(x));
    });
    ctx.stroke();
    $("p-out").innerHTML =
      `<p>range [${fmt(r.min, 4)}, ${fmt(r.max, 4)}]</p>` +
      table(["&epsilon;", "N(K, &epsilon;)"], r.covering.map((c) => [c.eps, c.n]));
  });
}

await init();
$("c-run").onclick = runConstants;
$("m-run").onclick = runCurve;
$("p-run").onclick = runPath;
runConstants();
runPath();
