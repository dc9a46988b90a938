import init, { contraction_trace, compare_laws, drift_heatmap } from "./pkg/sgdm_lab_web.js";

const num = (id) => Number(document.getElementById(id).value);
const out = (id, text, err = false) => {
  const el = document.getElementById(id);
  el.textContent = text;
  el.className = err ? "err" : "";
};

function axes(ctx, w, h) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(30, 10, w - 40, h - 30);
}

function line(ctx, xs, ys, box, color) {
  const [x0, x1, y0, y1] = box;
  const { width: w, height: h } = ctx.canvas;
  const px = (x) => 30 + ((x - x0) / (x1 - x0)) * (w - 40);
  const py = (y) => h - 20 - ((y - y0) / (y1 - y0)) * (h - 30);
  ctx.strokeStyle = color;
  ctx.beginPath();
  xs.forEach((x, i) => (i ? ctx.lineTo(px(x), py(ys[i])) : ctx.moveTo(px(x), py(ys[i]))));
  ctx.stroke();
}

function runContraction() {
  try {
    const r = JSON.parse(contraction_trace(num("c-gamma"), num("c-amp"), num("c-horizon"), num("c-seed")));
    const ctx = document.getElementById("c-plot").getContext("2d");
    axes(ctx, ctx.canvas.width, ctx.canvas.height);
    const logs = r.distances.map((d) => Math.log10(Math.max(d, 1e-300)));
    const lo = Math.min(...logs), hi = Math.max(...logs);
    line(ctx, r.times, logs, [0, r.times[r.times.length - 1], lo, hi], "#1565c0");
    const oracle = r.oracle === null ? "" : `, eigenvalue oracle ${r.oracle.toFixed(4)}`;
    out("c-out", `log10 distance; fitted rate ${r.theta_hat?.toFixed(4)}${oracle}`);
  } catch (e) {
    out("c-out", String(e), true);
  }
}

function runLaws() {
  try {
    const r = JSON.parse(compare_laws(num("l-eta"), num("l-batch"), num("l-gamma"), num("l-count"), num("l-seed")));
    const ctx = document.getElementById("l-plot").getContext("2d");
    axes(ctx, ctx.canvas.width, ctx.canvas.height);
    const [lo, hi] = r.range;
    const n = r.hist_sgdm.length;
    const xs = r.hist_sgdm.map((_, i) => lo + ((i + 0.5) * (hi - lo)) / n);
    const top = Math.max(...r.hist_sgdm, ...r.hist_exact);
    line(ctx, xs, r.hist_exact, [lo, hi, 0, top], "#2e7d32");
    line(ctx, xs, r.hist_sgdm, [lo, hi, 0, top], "#c62828");
    out(
      "l-out",
      `position density: green exact, red SGDm (t = ${r.time.toFixed(3)})\n` +
        `sliced W1 ${r.w1.toExponential(3)} (floor ${r.w1_floor.toExponential(3)})\n` +
        `histogram TV ${r.tv.toFixed(4)} (floor ${r.tv_floor.toFixed(4)}), blowups ${r.blowups}`
    );
  } catch (e) {
    out("l-out", String(e), true);
  }
}

function runDrift() {
  try {
    const r = JSON.parse(drift_heatmap(num("d-gamma"), num("d-beta"), num("d-amp"), num("d-radius"), 100));
    const ctx = document.getElementById("d-plot").getContext("2d");
    const c = r.cells, px = ctx.canvas.width / c;
    const scaled = r.margins.map((m) => Math.log1p(Math.max(m, 0)));
    const top = Math.max(...scaled) || 1;
    r.margins.forEach((m, k) => {
      const i = Math.floor(k / c), j = k % c;
      const v = Math.round(255 * (1 - scaled[k] / top));
      ctx.fillStyle = m < -1e-9 ? "#d00" : `rgb(${v},${v},255)`;
      ctx.fillRect(j * px, (c - 1 - i) * px, px + 1, px + 1);
    });
    out("d-out", `x horizontal, m vertical; λ = ${r.lambda.toFixed(4)}, worst margin ${r.worst_margin.toExponential(3)} (red cells violate)`);
  } catch (e) {
    out("d-out", String(e), true);
  }
}

await init();
document.getElementById("c-run").onclick = runContraction;
document.getElementById("l-run").onclick = runLaws;
document.getElementById("d-run").onclick = runDrift;
runContraction();
runLaws();
runDrift();
