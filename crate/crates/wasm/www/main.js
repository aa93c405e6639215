import init, { shapes, encode_shape, decode_tokens, vocab_size } from "./pkg/striptok_wasm.js";

const $ = (id) => document.getElementById(id);
const view = { yaw: 0.6, pitch: 0.5 };
let original = [];
let tokens = [];
let encoded = null;
let decoded = null;

function rotate([x, y, z]) {
  x -= 0.5; y -= 0.5; z -= 0.5;
  const [cy, sy, cp, sp] = [Math.cos(view.yaw), Math.sin(view.yaw), Math.cos(view.pitch), Math.sin(view.pitch)];
  const x1 = cy * x + sy * z, z1 = -sy * x + cy * z;
  return [x1, cp * y - sp * z1, sp * y + cp * z1];
}

// faces: [{ points, color }], drawn back to front
function draw(canvas, faces) {
  const ctx = canvas.getContext("2d");
  const s = canvas.width * 0.55;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const projected = faces.map(({ points, color }) => {
    const r = points.map(rotate);
    return { r, color, depth: r.reduce((d, p) => d + p[2], 0) / r.length };
  });
  projected.sort((a, b) => a.depth - b.depth);
  ctx.lineWidth = 0.6;
  ctx.strokeStyle = "#333";
  for (const { r, color } of projected) {
    ctx.beginPath();
    r.forEach(([x, y], k) => {
      const px = canvas.width / 2 + x * s, py = canvas.height / 2 - y * s;
      k === 0 ? ctx.moveTo(px, py) : ctx.lineTo(px, py);
    });
    ctx.closePath();
    ctx.fillStyle = color;
    ctx.fill();
    ctx.stroke();
  }
}

const hue = (i, n) => `hsl(${Math.round((i * 360) / Math.max(n, 1) * 7) % 360} 70% 70%)`;

function redraw() {
  if (encoded) {
    const n = encoded.strips.length;
    draw($("encoded"), encoded.strips.flatMap((s, i) => s.faces.map((points) => ({ points, color: hue(i, n) }))));
  }
  if (decoded) {
    draw($("decoded"), decoded.faces.map((points) => ({ points, color: points.length === 4 ? "#9cc9f0" : "#f0c89c" })));
  }
}

function showTokens() {
  const box = $("tokens");
  box.replaceChildren();
  const shown = tokens.slice(0, 2000);
  for (let i = 0; i < shown.length; i++) {
    const span = document.createElement("span");
    span.textContent = shown[i];
    span.className = classOf(shown[i]);
    box.append(span, " ");
  }
  if (tokens.length > shown.length) box.append(`… ${tokens.length - shown.length} more`);
}

function classOf(id) {
  if (id < 64) return "geo";
  if (id < 128) return "t";
  if (id < 192) return "uv";
  if (id < 704) return "c2";
  if (id < 4800) return "c3";
  return "invalid";
}

function runEncode() {
  try {
    encoded = JSON.parse(encode_shape($("shape").value, Number($("size").value)));
  } catch (e) {
    $("encode-stats").textContent = String(e);
    return;
  }
  original = encoded.tokens.slice();
  tokens = original.slice();
  const shares = encoded.level_shares.map((x) => x.toFixed(3)).join(" / ");
  $("encode-stats").textContent =
    `faces ${encoded.faces}, vertices ${encoded.vertices}, stride ${encoded.stride}\n` +
    `strips ${encoded.strips.length}, tokens ${encoded.tokens.length}, comp_rate ${encoded.comp_rate.toFixed(4)}\n` +
    `c1 / c2 / c3 shares ${shares}`;
  showTokens();
  runDecode(encoded.stride);
}

function runDecode(stride) {
  decoded = JSON.parse(decode_tokens(Uint16Array.from(tokens), stride));
  const r = decoded.report;
  $("decode-stats").textContent =
    `stride ${decoded.stride}: faces ${decoded.faces.length}, vertices ${decoded.vertices}, islands ${decoded.islands}\n` +
    Object.entries(r).map(([k, v]) => `${k} ${v}`).join("\n");
  redraw();
}

function corrupt() {
  const n = Math.min(Number($("edits").value), tokens.length);
  const size = vocab_size();
  for (let k = 0; k < n; k++) {
    tokens[Math.floor(Math.random() * tokens.length)] = Math.floor(Math.random() * size);
  }
  showTokens();
  runDecode(encoded ? encoded.stride : 1);
}

function enableDrag(canvas) {
  let last = null;
  canvas.addEventListener("pointerdown", (e) => { last = [e.clientX, e.clientY]; canvas.setPointerCapture(e.pointerId); });
  canvas.addEventListener("pointerup", () => { last = null; });
  canvas.addEventListener("pointermove", (e) => {
    if (!last) return;
    view.yaw += (e.clientX - last[0]) * 0.01;
    view.pitch += (e.clientY - last[1]) * 0.01;
    last = [e.clientX, e.clientY];
    redraw();
  });
}

await init();
for (const name of JSON.parse(shapes())) {
  $("shape").append(new Option(name, name));
}
$("encode").onclick = runEncode;
$("corrupt").onclick = corrupt;
$("restore").onclick = () => { tokens = original.slice(); showTokens(); runDecode(encoded.stride); };
$("decode1").onclick = () => runDecode(1);
$("decode2").onclick = () => runDecode(2);
enableDrag($("encoded"));
enableDrag($("decoded"));
runEncode();
