class Stack {
  constructor() { this.items = []; }
  push(v) { this.items.push(v); return this; }
  pop() { return this.items.pop(); }
  get depth() { return this.items.length; }
}
var s = new Stack();
s.push(1).push(2).push(3);
out(s.pop());
out(s.depth);
out(s.pop() + s.pop());
