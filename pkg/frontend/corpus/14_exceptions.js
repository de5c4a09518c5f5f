function explode(code) {
  if (code > 3) throw new Error("code too big: " + code);
  return "ok:" + code;
}
function attempt(code) {
  try {
    return explode(code);
  } catch (e) {
    return "caught " + e.message;
  }
}
out(attempt(2));
out(attempt(9));
