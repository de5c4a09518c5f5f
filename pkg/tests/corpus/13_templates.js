const who = "world";
const msg = `hello ${who}, sum=${(a => a + 1)(41)}`;
const nested = `outer ${`inner ${(() => "x")()}`}`;
function tag(parts, ...vals) { return parts.raw.join(""); }
const tagged = tag`a ${function inTag() { return 1; }} b`;
