var xs = [5, 3, 8, 1, 9, 2];
var evens = xs.filter(function (x) { return x % 2 === 0; });
var doubled = xs.map(function (x) { return x * 2; });
var total = xs.reduce(function (a, b) { return a + b; }, 0);
var [first, ...rest] = xs;
console.log(evens.join(','), doubled.join(','), total, first, rest.length);
console.log([...xs].sort(function (a, b) { return a - b; }).join('<'));
