const box = {
  get full() { return this.w * this.h; },
  set full(v) { this.w = v; },
};
class Panel {
  get size() { return 1; }
  set size(v) {}
  static get kind() { return "panel"; }
  static set kind(v) {}
}
