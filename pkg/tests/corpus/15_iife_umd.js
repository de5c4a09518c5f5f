(function (root, factory) {
  if (typeof define === "function" && define.amd) {
    define([], factory);
  } else if (typeof module === "object" && module.exports) {
    module.exports = factory();
  } else {
    root.lib = factory();
  }
}(typeof self !== "undefined" ? self : this, function () {
  "use strict";
  function helper(x) { return x | 0; }
  return { helper: helper };
}));
