/* leading */ function /* name soon */ spaced /* args */(a /* first */) /* body */ {
  // inside
  return a; /* trailing */
}
var after = /* assignment */ () => /* expr body */ a + 1;
