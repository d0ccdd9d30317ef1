var words = ['permission', 'system', 'package'];
var out = [];
for (var i = 0; i < words.length; i++) {
  var w = words[i];
  out.push(w.charAt(0).toUpperCase() + w.slice(1));
}
console.log(out.join(' '));
console.log('x'.repeat(8), 'abc'.indexOf('b'), '  trim  '.trim());
console.log(`template ${words.length} ${words[2].length}`);
