async function loadAll(urls) {
  const out = [];
  for await (const u of urls) out.push(await fetch(u));
  return out;
}
const quick = async () => await Promise.resolve(1);
const quickBlock = async (x) => { return x; };
function* counter(start) {
  let n = start;
  while (true) yield n++;
}
async function* merge(a, b) {
  yield* a;
  yield* b;
}
