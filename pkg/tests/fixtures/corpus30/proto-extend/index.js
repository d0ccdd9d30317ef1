String.prototype.reverse = function () {
  return this.split("").reverse().join("");
};
module.exports = function (s) { return s.reverse(); };
