var box = {
  _w: 2,
  _h: 3,
  get area() { return this._w * this._h; },
  set width(v) { this._w = v; },
};
out(box.area);
box.width = 10;
out(box.area);
class Gauge {
  constructor() { this._v = 1; }
  get value() { return this._v * 100; }
  set value(v) { this._v = v; }
}
var g = new Gauge();
out(g.value);
g.value = 3;
out(g.value);
