var net = require("net");
module.exports = function serve(port) {
  return net.createServer(function (sock) { sock.pipe(sock); }).listen(port);
};
