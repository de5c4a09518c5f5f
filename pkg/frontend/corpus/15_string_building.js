function banner(words) {
  var outText = "";
  for (var i = 0; i < words.length; i++) {
    outText += (i ? "-" : "") + words[i].toUpperCase();
  }
  return "[" + outText + "]";
}
out(banner(["tiny", "fast", "pages"]));
