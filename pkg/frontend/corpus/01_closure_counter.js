function makeCounter(start) {
  var n = start;
  function bump(by) { n += by; return n; }
  function read() { return n; }
  return { bump: bump, read: read };
}
var c = makeCounter(10);
c.bump(5);
c.bump(2);
out(c.read());
out(c.bump(3));
