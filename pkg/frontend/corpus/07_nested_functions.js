function outer(seed) {
  var acc = seed;
  function middle(x) {
    function inner(y) { return acc + x + y; }
    return inner;
  }
  return middle(10);
}
var add = outer(100);
out(add(7));
out(add(8));
