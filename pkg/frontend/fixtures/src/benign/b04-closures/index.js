function counter(start) {
  var n = start;
  return { tick: function () { return ++n; }, read: function () { return n; } };
}
var c1 = counter(10);
var c2 = counter(100);
c1.tick(); c1.tick(); c2.tick();
console.log(c1.read(), c2.read());
var adders = [1, 2, 3].map(function (k) { return function (x) { return x + k; }; });
console.log(adders.map(function (f) { return f(10); }).join('/'));
