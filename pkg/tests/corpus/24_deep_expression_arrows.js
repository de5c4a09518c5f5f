const objBody = () => ({ key: "value", nested: () => ({ deep: 1 }) });
const seqBody = (a, b) => (a, b);
const condBody = f => f ? () => 1 : () => 2;
const wrapped = (n) => ((n));
const chained = p => p.then(r => r.json()).then(d => d.items);
