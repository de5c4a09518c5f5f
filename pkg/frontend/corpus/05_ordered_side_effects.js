var trail = [];
function first() { trail.push("first"); out("in-first"); }
function second() { trail.push("second:" + trail.length); out("in-second"); }
first();
second();
first();
out(trail.join("|"));
