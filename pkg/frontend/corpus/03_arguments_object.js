function tally() {
  var sum = 0;
  for (var i = 0; i < arguments.length; i++) sum += arguments[i];
  return arguments.length + ":" + sum;
}
out(tally());
out(tally(1, 2, 3));
function snapshot(a, b) {
  var copy = Array.prototype.slice.call(arguments);
  return copy.join("/") + ":" + a + "," + b;
}
out(snapshot(1, 2, 3));
