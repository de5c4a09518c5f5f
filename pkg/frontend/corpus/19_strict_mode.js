"use strict";
function freezeCheck(obj) {
  "use strict";
  Object.freeze(obj);
  try {
    obj.locked = true;
    return "silently ignored";
  } catch (e) {
    return "threw " + e.name;
  }
}
out(freezeCheck({}));
function strictThis() { return typeof this; }
out(strictThis());
