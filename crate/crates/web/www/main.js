import init, { Explorer } from "./pkg/parafatou_web.js";

const $ = (id) => document.getElementById(id);
const canvas = $("view");
const ctx2d = canvas.getContext("2d");
const N = canvas.width;

let explorer = null;
let view = null;

function defaultView(kind, mode, summary) {
  if (mode === "structural") {
    return { re: 0, im: 0, width: 6 * summary.critical_modulus };
  }
  switch (kind) {
    case "quad": return { re: -0.5, im: 0, width: 2.5 };
    case "expm1": return { re: -1.5, im: 0, width: 8 };
    case "zexpz": return { re: -1.5, im: 0, width: 6 };
    case "c_d":
    case "c_inf": return { re: -2, im: 0, width: 8 };
    default: return { re: 0, im: 0, width: 2.2 };
  }
}

function fmt(x) {
  return Number.isFinite(x) ? x.toPrecision(10) : String(x);
}

function pixelToPoint(ev) {
  const r = canvas.getBoundingClientRect();
  const j = (ev.clientX - r.left) * N / r.width;
  const k = (ev.clientY - r.top) * N / r.height;
  return {
    re: view.re - view.width / 2 + j * view.width / N,
    im: view.im + view.width / 2 - k * view.width / N,
  };
}

function draw() {
  const t0 = performance.now();
  try {
    const rgba = explorer.render($("mode").value, view.re, view.im, view.width, N, N);
    ctx2d.putImageData(new ImageData(new Uint8ClampedArray(rgba), N, N), 0, 0);
    $("status").textContent =
      `center ${fmt(view.re)} ${view.im < 0 ? "−" : "+"} ${fmt(Math.abs(view.im))}i, ` +
      `width ${fmt(view.width)}, ${(performance.now() - t0).toFixed(0)} ms`;
  } catch (e) {
    $("status").textContent = `render failed: ${e.message ?? e}`;
  }
}

function rebuild(resetView) {
  try {
    explorer?.free();
    explorer = new Explorer($("map").value, Number($("budget").value));
  } catch (e) {
    $("summary").textContent = `error: ${e.message ?? e}`;
    return;
  }
  const summary = JSON.parse(explorer.summary());
  const via = summary.germ_of !== summary.kind ? `through the semiconjugate ${summary.germ_of}\n` : "";
  $("summary").textContent = via +
    `γ      = ${fmt(summary.gamma[0])} + ${fmt(summary.gamma[1])}i\n` +
    `v′     = ${fmt(summary.v_prime[0])} + ${fmt(summary.v_prime[1])}i\n` +
    `|ν|    = ${fmt(summary.critical_modulus)} (≈ 1/${(1 / summary.critical_modulus).toFixed(1)})`;
  if (resetView || !view) view = defaultView(summary.kind, $("mode").value, summary);
  draw();
}

canvas.addEventListener("click", (ev) => {
  const p = pixelToPoint(ev);
  view = { re: p.re, im: p.im, width: view.width * (ev.shiftKey ? 2 : 0.5) };
  draw();
});

canvas.addEventListener("mousemove", (ev) => {
  const p = pixelToPoint(ev);
  let text = `z = ${fmt(p.re)} ${p.im < 0 ? "−" : "+"} ${fmt(Math.abs(p.im))}i\n`;
  if ($("mode").value === "dynamical") {
    try {
      const [re, im, err, iters] = explorer.fatou(p.re, p.im);
      text += `Φ(z) = ${fmt(re)} + ${fmt(im)}i\nerr ${err.toExponential(1)}, ${iters} iterations`;
    } catch (e) {
      text += `no Fatou coordinate: ${e.message ?? e}`;
    }
  }
  $("point").textContent = text;
});

$("horn").addEventListener("click", () => {
  const [re, im] = $("zeta").value.split(",").map(Number);
  try {
    const [hr, hi] = explorer.horn(re, im);
    $("hornout").textContent =
      `h(ζ) = ${fmt(hr)} + ${fmt(hi)}i\nh(ζ) − ζ = ${fmt(hr - re)} + ${fmt(hi - im)}i`;
  } catch (e) {
    $("hornout").textContent = `error: ${e.message ?? e}`;
  }
});

$("map").addEventListener("change", () => rebuild(true));
$("mode").addEventListener("change", () => rebuild(true));
$("budget").addEventListener("change", () => rebuild(false));
$("reset").addEventListener("click", () => rebuild(true));

await init();
rebuild(true);
