function flatten(list, depth) {
  if (depth === undefined) depth = 1;
  var out = [];
  for (var i = 0; i < list.length; i++) {
    var item = list[i];
    if (Array.isArray(item) && depth > 0) {
      out = out.concat(flatten(item, depth - 1));
    } else {
      out.push(item);
    }
  }
  return out;
}
module.exports = flatten;
