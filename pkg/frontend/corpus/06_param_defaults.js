function greet(name, punct = "!", suffix = name + punct) {
  return "hi " + suffix;
}
out(greet("zoe"));
out(greet("max", "?"));
out(greet("liv", ".", "custom"));
