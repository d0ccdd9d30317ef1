var record = { alpha: 1, beta: 2, gamma: 3 };
var sum = 0;
for (var key in record) {
  sum += record[key];
}
var picks = '';
outer: for (var i = 0; i < 4; i++) {
  for (var j = 0; j < 4; j++) {
    if (j > i) continue outer;
    if (i === 3) break outer;
    picks += i + '' + j + ';';
  }
}
switch (sum) {
  case 6: picks += 'six'; break;
  default: picks += 'other';
}
try { JSON.parse('{bad'); } catch (e) { picks += '|caught'; } finally { picks += '|fin'; }
do { sum -= 2; } while (sum > 0);
console.log(sum, picks);
