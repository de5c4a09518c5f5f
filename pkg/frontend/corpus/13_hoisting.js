function zone() {
  out(typeof later);
  if (frontUp()) { var later = "assigned"; }
  function frontUp() { return true; }
  return later;
}
out(zone());
