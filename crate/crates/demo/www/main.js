import init, { run_tournament_2d, kappa_curve_json, failure_vs_blocks_json } from "./pkg/tournament_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function drawTournament(view) {
  const c = $("t-canvas");
  const g = c.getContext("2d");
  const s = c.width / 2.6;
  const X = (p) => c.width / 2 + s * p[0];
  const Y = (p) => c.height / 2 - s * p[1];
  g.clearRect(0, 0, c.width, c.height);
  g.strokeStyle = "#ddd";
  g.beginPath();
  g.arc(c.width / 2, c.height / 2, s, 0, 2 * Math.PI);
  g.stroke();
  view.members.forEach((p, i) => {
    g.fillStyle = view.f1.includes(String(i)) ? "#36c" : "#aaa";
    g.beginPath();
    g.arc(X(p), Y(p), 5, 0, 2 * Math.PI);
    g.fill();
    g.fillText(String(i), X(p) + 7, Y(p) - 7);
  });
  const t = view.target;
  g.strokeStyle = "#000";
  g.beginPath();
  g.moveTo(X(t) - 6, Y(t) - 6); g.lineTo(X(t) + 6, Y(t) + 6);
  g.moveTo(X(t) - 6, Y(t) + 6); g.lineTo(X(t) + 6, Y(t) - 6);
  g.stroke();
  g.fillStyle = "rgba(40,160,70,0.8)";
  g.beginPath();
  g.arc(X(view.tournament.point), Y(view.tournament.point), 8, 0, 2 * Math.PI);
  g.fill();
  g.strokeStyle = "#c33";
  g.lineWidth = 2;
  g.beginPath();
  g.arc(X(view.erm.point), Y(view.erm.point), 12, 0, 2 * Math.PI);
  g.stroke();
  g.lineWidth = 1;
}

function axes(g, c, xmax, ymax, pad) {
  g.clearRect(0, 0, c.width, c.height);
  g.strokeStyle = "#888";
  g.beginPath();
  g.moveTo(pad, 10); g.lineTo(pad, c.height - pad); g.lineTo(c.width - 10, c.height - pad);
  g.stroke();
  g.fillStyle = "#444";
  g.fillText(ymax.toFixed(2), 2, 16);
  g.fillText(xmax.toFixed(2), c.width - 40, c.height - pad + 14);
}

function drawKappa(curve) {
  const c = $("k-canvas");
  const g = c.getContext("2d");
  const pad = 36;
  const xmax = Math.max(...curve.xi);
  const ymax = Math.max(...curve.student, ...curve.gaussian);
  axes(g, c, xmax, ymax, pad);
  const X = (x) => pad + (c.width - pad - 10) * x / xmax;
  const Y = (y) => c.height - pad - (c.height - pad - 10) * y / ymax;
  for (const [ys, color] of [[curve.student, "#c33"], [curve.gaussian, "#36c"]]) {
    g.strokeStyle = color;
    g.beginPath();
    curve.xi.forEach((x, i) => (i ? g.lineTo(X(x), Y(ys[i])) : g.moveTo(X(x), Y(ys[i]))));
    g.stroke();
  }
}

function drawBlocks(rows) {
  const c = $("b-canvas");
  const g = c.getContext("2d");
  const pad = 36;
  const ymax = Math.max(0.05, ...rows.map((r) => r.ci_high));
  axes(g, c, 0, ymax, pad);
  const w = (c.width - pad - 20) / rows.length;
  const Y = (y) => c.height - pad - (c.height - pad - 10) * y / ymax;
  rows.forEach((r, i) => {
    const x = pad + 10 + i * w;
    g.fillStyle = "#36c";
    g.fillRect(x, Y(r.failure_rate), w * 0.6, c.height - pad - Y(r.failure_rate));
    g.strokeStyle = "#000";
    g.beginPath();
    g.moveTo(x + w * 0.3, Y(r.ci_low)); g.lineTo(x + w * 0.3, Y(r.ci_high));
    g.stroke();
    g.fillStyle = "#444";
    g.fillText("n=" + r.n_blocks, x, c.height - pad + 14);
  });
}

function guarded(out, f) {
  try {
    f();
  } catch (e) {
    out.textContent = String(e);
  }
}

async function main() {
  await init();
  $("t-run").onclick = () => guarded($("t-out"), () => {
    const view = JSON.parse(run_tournament_2d(num("t-seed"), num("t-members"), num("t-df"), num("t-n")));
    drawTournament(view);
    $("t-out").textContent =
      `first round: ${view.f1.join(", ")}\nsecond round: ${view.f2.join(", ")}\n` +
      `tournament ${view.tournament.id}: excess ${view.tournament.excess.toFixed(4)}\n` +
      `ERM ${view.erm.id}: excess ${view.erm.excess.toFixed(4)}\n` +
      `${view.n_blocks} blocks, best member ${view.best_member}`;
  });
  $("k-run").onclick = () => guarded($("t-out"), () => {
    drawKappa(JSON.parse(kappa_curve_json(num("k-df"), num("k-draws"), 1)));
  });
  $("b-run").onclick = () => guarded($("t-out"), () => {
    drawBlocks(JSON.parse(failure_vs_blocks_json(1, num("b-trials"), num("b-size"), num("b-df"))));
  });
  $("t-run").click();
  $("k-run").click();
}

main();
