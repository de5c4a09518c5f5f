const handlers = {
  plain: function () { return 0; },
  method() { return 1; },
  get value() { return this._v; },
  set value(v) { this._v = v; },
  *items() { yield 1; },
  async fetchIt() { return 2; },
  "quoted name"() { return 3; },
  42() { return 4; },
  [dynamicKey]() { return 5; },
  arrow: () => 6,
};
