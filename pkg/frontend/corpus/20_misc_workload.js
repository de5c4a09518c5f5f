function Factory(tag) {
  if (!(this instanceof Factory)) return new Factory(tag);
  this.tag = tag;
}
Factory.prototype.stamp = function () { return "<" + this.tag + ">"; };
out(Factory("direct").stamp());
out(new Factory("newed").stamp());
var rows = [{ n: 3 }, { n: 1 }, { n: 2 }];
rows.sort(function (a, b) { return a.n - b.n; });
out(rows.map(function (r) { return r.n; }).join(""));
var { n: lowest, ...rest } = rows[0];
out(`lowest=${lowest} rest=${JSON.stringify(rest)}`);
