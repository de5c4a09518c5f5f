function applyAll(fns, start) {
  return fns.reduce(function (acc, f) { return f(acc); }, start);
}
var steps = [
  function (x) { return x * 2; },
  function (x) { return x + 1; },
  function (x) { return "v" + x; },
];
out(applyAll(steps, 5));
out([3, 1, 2].map(function (x) { return x * x; }).join(","));
