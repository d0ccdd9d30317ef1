async function step(n) {
  await Promise.resolve();
  return n * 3;
}
async function main() {
  var a = await step(1);
  var b = await step(a);
  var all = await Promise.all([step(1), step(2), step(3)]);
  console.log(a, b, all.join('-'));
}
main().then(function () { console.log('done'); });
