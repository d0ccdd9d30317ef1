var vals = [0.1, 2.5, 33.33, 404];
console.log(vals.map(function (v) { return v.toFixed(1); }).join(' '));
console.log(Math.max.apply(null, vals), Math.min(1, -1), Math.abs(-7));
console.log(parseInt('2f', 16), parseFloat('3.14xyz'), (1234.5678).toString(2).length);
console.log(Number.isInteger(404), 7 % 3, 2 ** 10);
