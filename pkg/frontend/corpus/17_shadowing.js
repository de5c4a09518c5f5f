var label = "global";
function paint(label) {
  function darker() { return label + "+dark"; }
  return darker();
}
out(paint("red"));
out(label);
