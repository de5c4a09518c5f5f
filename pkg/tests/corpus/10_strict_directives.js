"use strict";
"second prologue entry";
function strictFn(a) {
  "use strict";
  return a + 1;
}
var loose = function () {
  'use asm';
  return 0;
};
