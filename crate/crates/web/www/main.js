import init, { geodesic, heatmap, localization } from "./pkg/klab_web.js";

const $ = (id) => document.getElementById(id);
const fmt = (x) => (x == null ? "–" : x.toPrecision(6));

function toPixel(win, canvas, [x, y]) {
  const [x0, x1, y0, y1] = win;
  return [((x - x0) / (x1 - x0)) * canvas.width, ((y1 - y) / (y1 - y0)) * canvas.height];
}

function toPlane(win, canvas, px, py) {
  const [x0, x1, y0, y1] = win;
  return [x0 + (px / canvas.width) * (x1 - x0), y1 - (py / canvas.height) * (y1 - y0)];
}

// Viridis-ish ramp on [0, 1].
function colour(s) {
  const stops = [[68, 1, 84], [59, 82, 139], [33, 145, 140], [94, 201, 98], [253, 231, 37]];
  const t = Math.min(Math.max(s, 0), 1) * (stops.length - 1);
  const i = Math.min(Math.floor(t), stops.length - 2);
  const f = t - i;
  return stops[i].map((a, k) => Math.round(a + f * (stops[i + 1][k] - a)));
}

function drawHeat(canvas, data) {
  const ctx = canvas.getContext("2d");
  const { n, values } = data;
  const finite = values.filter((v) => v != null);
  const lo = Math.min(...finite);
  const hi = Math.max(...finite);
  const cell = canvas.width / n;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  values.forEach((v, k) => {
    if (v == null) return;
    const [r, g, b] = colour((v - lo) / (hi - lo || 1));
    ctx.fillStyle = `rgb(${r},${g},${b})`;
    ctx.fillRect((k % n) * cell, Math.floor(k / n) * cell, cell + 0.5, cell + 0.5);
  });
  return [lo, hi];
}

// The geodesic canvas shows a coarse heatmap as background.
const geo = { clicks: [], win: null, background: null };

function redrawGeo(result) {
  const canvas = $("geo");
  const ctx = canvas.getContext("2d");
  if (geo.background) ctx.putImageData(geo.background, 0, 0);
  if (result) {
    ctx.strokeStyle = "#d33";
    ctx.lineWidth = 2;
    ctx.beginPath();
    result.path.forEach((p, i) => {
      const [x, y] = toPixel(geo.win, canvas, p);
      i === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y);
    });
    ctx.stroke();
  }
  ctx.fillStyle = "#fff";
  for (const p of geo.clicks) {
    const [x, y] = toPixel(geo.win, canvas, p);
    ctx.beginPath();
    ctx.arc(x, y, 4, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function resetGeo() {
  const canvas = $("geo");
  const data = JSON.parse(heatmap($("geo-domain").value, 70, 1, 0));
  geo.win = data.window;
  geo.clicks = [];
  drawHeat(canvas, data);
  geo.background = canvas.getContext("2d").getImageData(0, 0, canvas.width, canvas.height);
  $("geo-out").textContent = "";
}

function onGeoClick(ev) {
  const canvas = $("geo");
  const r = canvas.getBoundingClientRect();
  const p = toPlane(geo.win, canvas, ev.clientX - r.left, ev.clientY - r.top);
  geo.clicks = geo.clicks.length >= 2 ? [p] : [...geo.clicks, p];
  redrawGeo(null);
  if (geo.clicks.length < 2) return;
  const [z, w] = geo.clicks;
  try {
    const res = JSON.parse(geodesic($("geo-domain").value, z[0], z[1], w[0], w[1], Number($("geo-eps").value)));
    redrawGeo(res);
    $("geo-out").textContent =
      `k_Ω ∈ [${fmt(res.distance.lower)}, ${fmt(res.distance.upper)}]\n` +
      `length ${fmt(res.length)}\nslack  ${fmt(res.epsilon)}\nnodes  ${res.path.length}`;
  } catch (e) {
    geo.clicks = [];
    $("geo-out").textContent = String(e);
  }
}

function runHeat() {
  try {
    const data = JSON.parse(heatmap($("heat-domain").value, Number($("heat-n").value), 1, 0));
    const [lo, hi] = drawHeat($("heat"), data);
    $("heat-out").textContent = Number.isFinite(lo)
      ? `log10 κ(z; 1)\nmin ${fmt(lo)}\nmax ${fmt(hi)}`
      : "κ vanishes identically";
  } catch (e) {
    $("heat-out").textContent = String(e);
  }
}

function runLocalization() {
  const body = $("loc").querySelector("tbody");
  body.innerHTML = "";
  $("loc-err").textContent = "";
  try {
    const { rows } = JSON.parse(localization($("loc-domain").value, Number($("loc-steps").value)));
    for (const r of rows) {
      const tr = document.createElement("tr");
      for (const v of [r.n, r.t, r.k_omega, r.k_local, r.ratio, r.difference]) {
        const td = document.createElement("td");
        td.textContent = Number.isInteger(v) ? v : fmt(v);
        tr.appendChild(td);
      }
      body.appendChild(tr);
    }
  } catch (e) {
    $("loc-err").textContent = String(e);
  }
}

await init();
$("geo").addEventListener("click", onGeoClick);
$("geo-domain").addEventListener("change", resetGeo);
$("heat-domain").addEventListener("change", runHeat);
$("heat-n").addEventListener("change", runHeat);
$("loc-domain").addEventListener("change", runLocalization);
$("loc-steps").addEventListener("change", runLocalization);
resetGeo();
runHeat();
runLocalization();
