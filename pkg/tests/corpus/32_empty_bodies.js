function empty() {}
var emptyExpr = function () {};
const emptyArrow = () => {};
class Hollow { vacant() {} get nothing() { return undefined; } }
