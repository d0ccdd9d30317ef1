var box = { value: 7 };
var key = 'value';
var sum = 0;
for (var i = 0; i < 100; i++) {
  sum += box[key];
}
console.log(sum);
