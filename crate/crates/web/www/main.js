// Expects the wasm-bindgen output (`--target web`) in ./pkg.
import init, { wavelet_matrix, dictionary_json, labs_race_json } from "./pkg/bodi_kit_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function drawBits(canvas, rows, cols, bit) {
  const ctx = canvas.getContext("2d");
  const cell = Math.max(1, Math.floor(Math.min(canvas.width / cols, canvas.height / rows)));
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  for (let r = 0; r < rows; r++) {
    for (let c = 0; c < cols; c++) {
      ctx.fillStyle = bit(r, c) ? "#111" : "#fff";
      ctx.fillRect(c * cell, r * cell, cell, cell);
    }
  }
}

function drawWavelet() {
  $("werr").textContent = "";
  const n = num("wn");
  try {
    const flat = wavelet_matrix(n);
    drawBits($("wcanvas"), n, n, (r, c) => flat[r * n + c]);
  } catch (e) {
    $("werr").textContent = String(e);
  }
}

function buildDictionary() {
  try {
    const view = JSON.parse(dictionary_json($("dkind").value, num("dd"), num("dm"), BigInt(num("ds"))));
    drawBits($("dcanvas"), view.m, view.d, (r, c) => view.rows[r][c]);
    $("dstats").textContent = [
      `coherence            ${view.coherence ?? "undefined (m = 1)"}`,
      `cardinality bound    ${view.cardinality_bound}`,
      `embedded cardinality ${view.embedded_cardinality ?? "not enumerated (d > 16)"}`,
      `row sums             ${view.row_sum_histogram.join(" ")}`,
      `sequencies           ${view.sequency_histogram.join(" ")}`,
    ].join("\n");
  } catch (e) {
    $("dstats").textContent = String(e);
  }
}

function plotRace(canvas, race) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const all = race.bodi.concat(race.random);
  const lo = Math.min(...all), hi = Math.max(...all);
  const x = (i) => 30 + (i / Math.max(1, race.bodi.length - 1)) * (w - 40);
  const y = (v) => h - 20 - ((v - lo) / Math.max(1e-9, hi - lo)) * (h - 40);
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(30, 20, w - 40, h - 40);
  for (const [trace, colour] of [[race.random, "#d95f02"], [race.bodi, "#1b9e77"]]) {
    ctx.strokeStyle = colour;
    ctx.lineWidth = 2;
    ctx.beginPath();
    trace.forEach((v, i) => (i ? ctx.lineTo(x(i), y(v)) : ctx.moveTo(x(i), y(v))));
    ctx.stroke();
  }
  ctx.fillStyle = "#1b9e77";
  ctx.fillText("BODi", 40, 14);
  ctx.fillStyle = "#d95f02";
  ctx.fillText("random", 80, 14);
}

function runRace() {
  $("lout").textContent = "running...";
  // let the status text paint before the synchronous run blocks the page
  setTimeout(() => {
    try {
      const race = JSON.parse(labs_race_json(num("ln"), num("lm"), num("lb"), BigInt(num("ls"))));
      plotRace($("lcanvas"), race);
      const last = (t) => t[t.length - 1].toFixed(4);
      const seq = race.best_sequence.map((b) => (b ? "+" : "-")).join("");
      $("lout").textContent = `final merit factor  BODi ${last(race.bodi)}  random ${last(race.random)}\nBODi best sequence  ${seq}`;
    } catch (e) {
      $("lout").textContent = String(e);
    }
  }, 20);
}

await init();
$("wgo").onclick = drawWavelet;
$("dgo").onclick = buildDictionary;
$("lgo").onclick = runRace;
drawWavelet();
buildDictionary();
