const inc = (x) => x + 1;
const twice = (f) => (x) => f(f(x));
const pick = (flag) => (flag ? () => "yes" : () => "no");
out(twice(inc)(5));
out(pick(true)());
out(pick(false)());
out(((a, b) => ({ sum: a + b }))(2, 3).sum);
