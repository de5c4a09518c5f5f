function Shape(kind) { this.kind = kind; }
Shape.prototype.describe = function () { return "a " + this.kind; };
Shape.prototype.rename = function (k) { this.kind = k; return this.describe(); };
var sh = new Shape("circle");
out(sh.describe());
out(sh.rename("square"));
