import init, { estimateText, simulateEstimate, runStudy } from "./pkg/tailavg_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function grid() {
  return [$("method").value, num("kmin"), num("kmax"), num("stride")];
}

function frame(ctx, xs, ys, title) {
  const { width: w, height: h } = ctx.canvas;
  const pad = 40;
  ctx.clearRect(0, 0, w, h);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  const sx = (x) => pad + ((x - x0) / (x1 - x0 || 1)) * (w - 2 * pad);
  const sy = (y) => h - pad - ((y - y0) / (y1 - y0 || 1)) * (h - 2 * pad);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#222";
  ctx.font = "12px sans-serif";
  ctx.fillText(title, pad, pad - 10);
  ctx.fillText(x0.toPrecision(3), pad, h - pad + 14);
  ctx.fillText(x1.toPrecision(3), w - pad - 30, h - pad + 14);
  ctx.fillText(y1.toPrecision(3), 2, pad + 4);
  ctx.fillText(y0.toPrecision(3), 2, h - pad);
  return { sx, sy };
}

function line(ctx, pts, sx, sy, color) {
  ctx.strokeStyle = color;
  ctx.beginPath();
  pts.forEach(([x, y], i) => (i ? ctx.lineTo(sx(x), sy(y)) : ctx.moveTo(sx(x), sy(y))));
  ctx.stroke();
}

function dots(ctx, pts, sx, sy, color) {
  ctx.fillStyle = color;
  for (const [x, y] of pts) ctx.fillRect(sx(x) - 1.5, sy(y) - 1.5, 3, 3);
}

function drawEstimate(v) {
  $("summary").className = "";
  $("summary").textContent =
    `n=${v.n} method=${v.method}  alpha=${v.alpha.toFixed(4)}  xi=${v.xi.toFixed(4)}  ` +
    `threshold=${v.threshold.toFixed(4)}  m_eff=${v.m_eff}  skipped=${v.skipped.length}`;

  const wctx = $("weights").getContext("2d");
  const ms = v.candidates.map((c) => c.m);
  const ws = v.candidates.map((c) => c.weight);
  const as = v.candidates.map((c) => c.alpha);
  let f = frame(wctx, ms, ws, "weight by exceedance count m");
  line(wctx, v.candidates.map((c) => [c.m, c.weight]), f.sx, f.sy, "#1f77b4");
  const amin = Math.min(...as), amax = Math.max(...as);
  const scaled = v.candidates.map((c) => [c.m, Math.min(...ws) + ((c.alpha - amin) / (amax - amin || 1)) * (Math.max(...ws) - Math.min(...ws))]);
  line(wctx, scaled, f.sx, f.sy, "#ff7f0e");
  wctx.fillStyle = "#ff7f0e";
  wctx.fillText(`alpha_m (rescaled, ${amin.toFixed(2)} to ${amax.toFixed(2)})`, 250, 30);

  const sctx = $("survival").getContext("2d");
  const sx = v.survival.map((r) => r.x);
  const sy = v.survival.flatMap((r) => [r.observed, r.fitted]);
  f = frame(sctx, sx, sy, "log survival above threshold vs log x");
  dots(sctx, v.survival.map((r) => [r.x, r.observed]), f.sx, f.sy, "#333");
  line(sctx, v.survival.map((r) => [r.x, r.fitted]), f.sx, f.sy, "#d62728");

  const qctx = $("qq").getContext("2d");
  const qx = v.qq.map((r) => r.x);
  const qy = v.qq.flatMap((r) => [r.observed, r.fitted]);
  f = frame(qctx, qx, qy, "log observed vs log fitted quantile");
  dots(qctx, v.qq.map((r) => [r.x, r.observed]), f.sx, f.sy, "#333");
  line(qctx, v.qq.map((r) => [r.x, r.fitted]), f.sx, f.sy, "#d62728");
}

function drawStudy(v) {
  $("study-summary").className = "";
  $("study-summary").textContent =
    `true=${v.alpha_true}  mean=${v.mean_alpha.toFixed(4)}  bias=${v.bias.toFixed(4)}  ` +
    `mse=${v.mse.toFixed(4)}  threshold=${v.mean_threshold.toFixed(3)}  failures=${v.failures}`;
  const ctx = $("histogram").getContext("2d");
  const xs = v.histogram.map((b) => b[0]);
  const width = xs.length > 1 ? xs[1] - xs[0] : 1;
  const f = frame(ctx, [xs[0] - width / 2, xs[xs.length - 1] + width / 2], [0, ...v.histogram.map((b) => b[1])], "estimated index per replicate");
  ctx.fillStyle = "#1f77b4";
  for (const [c, n] of v.histogram) {
    const left = f.sx(c - width / 2), right = f.sx(c + width / 2);
    ctx.fillRect(left, f.sy(n), right - left - 1, f.sy(0) - f.sy(n));
  }
}

function guarded(target, fn) {
  try {
    fn();
  } catch (e) {
    $(target).className = "error";
    $(target).textContent = String(e.message ?? e);
  }
}

function simulate() {
  guarded("summary", () => {
    const json = simulateEstimate($("family").value, num("shape"), num("sigma"), num("mu"), num("n"), num("seed"), ...grid());
    drawEstimate(JSON.parse(json));
  });
}

await init();

$("shape").addEventListener("input", () => {
  $("shape-value").textContent = $("shape").value;
  simulate();
});
$("simulate").addEventListener("click", simulate);
$("estimate").addEventListener("click", () =>
  guarded("summary", () => drawEstimate(JSON.parse(estimateText($("data").value, ...grid(), $("abs").checked)))),
);
$("study").addEventListener("click", () =>
  guarded("study-summary", () => {
    const json = runStudy($("family").value, num("shape"), num("sigma"), num("mu"), num("n"), num("reps"), num("seed"), ...grid(), num("bins"));
    drawStudy(JSON.parse(json));
  }),
);
simulate();
