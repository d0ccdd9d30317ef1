function* fib() {
  var a = 0, b = 1;
  for (;;) { yield a; var t = a + b; a = b; b = t; }
}
var seq = [];
for (var v of fib()) {
  if (v > 50) break;
  seq.push(v);
}
console.log(seq.join(','));
function* letters() { yield* ['x', 'y']; yield 'z'; }
console.log([...letters()].join(''));
