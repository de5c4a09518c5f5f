function* steps(start) {
  var got = yield start;
  var next = yield start + got;
  return start + got + next;
}
var it = steps(10);
out(it.next().value);
out(it.next(5).value);
out(it.next(100).value);
function* naturals() { for (var i = 1; i <= 4; i++) yield i; }
var squares = [];
for (var n of naturals()) squares.push(n * n);
out(squares.join(","));
